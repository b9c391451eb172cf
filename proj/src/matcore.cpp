// Copyright 2026 The Coherence Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coherence/matcore.hpp"

#include <algorithm>
#include <cmath>

namespace coherence {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPsd: return "NotPSD";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::BadAlpha: return "BadAlpha";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::CompletionFailure: return "CompletionFailure";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

bool all_finite(const CMatrix& m) {
  return m.allFinite();
}

double hermiticity_residual(const CMatrix& h) {
  return (h - h.adjoint()).norm();
}

CMatrix hermitian_part(const CMatrix& h) {
  return 0.5 * (h + h.adjoint());
}

namespace {

CMatrix checked_hermitian(const CMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw CoherenceError(ErrorKind::DimMismatch, "eigh expects a non-empty square matrix");
  }
  if (!h.allFinite()) {
    throw CoherenceError(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  }
  const double residual = hermiticity_residual(h);
  if (residual > kHermitianTol * std::max(1.0, h.norm())) {
    throw CoherenceError(ErrorKind::NotHermitian,
                         "hermiticity residual " + std::to_string(residual));
  }
  // The eigensolver reads one triangle only; symmetrize anything that is not
  // already Hermitian to rounding.
  if (residual > 1e-12 * std::max(1.0, h.norm())) return hermitian_part(h);
  return h;
}

}  // namespace

EigenSystem eigh(const CMatrix& h) {
  const CMatrix herm = checked_hermitian(h);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw CoherenceError(ErrorKind::NoConvergence, "Hermitian eigensolver did not converge");
  }
  const Index n = herm.rows();
  EigenSystem es{RVector(n), CMatrix(n, n)};
  // Eigen returns ascending order.
  for (Index j = 0; j < n; ++j) {
    es.values(j) = solver.eigenvalues()(n - 1 - j);
    es.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  return es;
}

RVector eigvalsh(const CMatrix& h) {
  const CMatrix herm = checked_hermitian(h);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw CoherenceError(ErrorKind::NoConvergence, "Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues().reverse();
}

double trace_norm(const CMatrix& m) {
  if (!m.allFinite()) {
    throw CoherenceError(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  }
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

RVector checked_psd_eigenvalues(const EigenSystem& es) {
  const Index n = es.values.size();
  const double top = es.values(0);
  const double bottom = es.values(n - 1);
  if (bottom < -1e-8 * std::max(1.0, top)) {
    throw CoherenceError(ErrorKind::NotPsd, "minimum eigenvalue " + std::to_string(bottom));
  }
  return es.values;
}

namespace {

template <class F>
CMatrix spectral_map(const EigenSystem& es, double floor, F&& f, double scale = 0.0) {
  const RVector& lambda = es.values;
  const double cutoff = floor * std::max({lambda(0), scale, 0.0});
  const Index n = lambda.size();
  CMatrix scaled = es.vectors;
  for (Index j = 0; j < n; ++j) {
    const double v = lambda(j) > cutoff && lambda(j) > 0.0 ? f(lambda(j)) : 0.0;
    scaled.col(j) *= v;
  }
  CMatrix out = scaled * es.vectors.adjoint();
  return hermitian_part(out);
}

}  // namespace

CMatrix psd_power(const CMatrix& h, double t, double floor, double scale) {
  if (!std::isfinite(t)) {
    throw CoherenceError(ErrorKind::InvalidArgument, "psd_power exponent must be finite");
  }
  const EigenSystem es = eigh(h);
  checked_psd_eigenvalues(es);
  return spectral_map(es, floor, [t](double x) { return std::pow(x, t); }, scale);
}

CMatrix psd_log2(const CMatrix& h, double floor) {
  const EigenSystem es = eigh(h);
  checked_psd_eigenvalues(es);
  return spectral_map(es, floor, [](double x) { return std::log2(x); });
}

double xlog2x_sum(const RVector& values) {
  const double top = values.size() > 0 ? std::max(values.maxCoeff(), 0.0) : 0.0;
  double acc = 0.0;
  for (Index j = 0; j < values.size(); ++j) {
    const double x = values(j);
    if (x > kEigFloor * top && x > 0.0) acc += x * std::log2(x);
  }
  return acc;
}

double trace_xlog2x(const CMatrix& h, double floor) {
  const EigenSystem es = eigh(h);
  const RVector lambda = checked_psd_eigenvalues(es);
  const double cutoff = floor * std::max(lambda(0), 0.0);
  double acc = 0.0;
  for (Index j = 0; j < lambda.size(); ++j) {
    if (lambda(j) > cutoff && lambda(j) > 0.0) acc += lambda(j) * std::log2(lambda(j));
  }
  return acc;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix ket_bra(Index n, Index i, Index j) {
  CMatrix out = CMatrix::Zero(n, n);
  out(i, j) = 1.0;
  return out;
}

}  // namespace coherence
