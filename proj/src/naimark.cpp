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

#include "coherence/naimark.hpp"

#include <algorithm>
#include <cmath>

namespace coherence {

namespace {

constexpr double kAcceptResidual = 1e-3;

// Orthogonalizes `candidate` against the first `count` columns of `basis`
// (twice, for stability). Returns the residual norm before normalization.
double orthogonalize(CVector& candidate, const CMatrix& basis, Index count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Index c = 0; c < count; ++c) {
      candidate -= basis.col(c) * basis.col(c).dot(candidate);
    }
  }
  return candidate.norm();
}

// Largest-magnitude component real and positive.
void fix_phase(CVector& v) {
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  const Complex c = v(arg);
  v *= std::conj(c) / std::abs(c);
}

}  // namespace

ProjectiveMeasurement register_measurement(Index d, std::size_t n) {
  std::vector<CMatrix> projectors;
  const Index nn = static_cast<Index>(n);
  for (Index i = 0; i < nn; ++i) {
    projectors.push_back(kron(CMatrix::Identity(d, d), ket_bra(nn, i, i)));
  }
  return ProjectiveMeasurement::from_projectors(std::move(projectors));
}

CMatrix attach_register(const CMatrix& x, std::size_t n) {
  const Index nn = static_cast<Index>(n);
  return kron(x, ket_bra(nn, 0, 0));
}

NaimarkExtension build_extension(const Povm& e, std::optional<std::uint64_t> completion_seed) {
  const Index d = e.dim();
  const std::size_t n = e.size();
  const Index nn = static_cast<Index>(n);
  const Index total = d * nn;

  // Orthonormal columns in construction order: W first, then completions.
  CMatrix ortho(total, total);
  for (Index b = 0; b < d; ++b) {
    CVector col = CVector::Zero(total);
    for (Index i = 0; i < nn; ++i) {
      for (Index a = 0; a < d; ++a) col(a * nn + i) = e.kraus()[static_cast<std::size_t>(i)](a, b);
    }
    ortho.col(b) = col;
  }
  if ((ortho.leftCols(d).adjoint() * ortho.leftCols(d) - CMatrix::Identity(d, d)).norm() > 1e-9) {
    throw CoherenceError(ErrorKind::CompletionFailure, "POVM isometry is not orthonormal");
  }

  Index count = d;
  auto try_candidate = [&](CVector candidate) {
    if (count == total) return;
    const double residual = orthogonalize(candidate, ortho, count);
    if (residual < kAcceptResidual) return;
    candidate /= residual;
    fix_phase(candidate);
    ortho.col(count++) = candidate;
  };
  if (!completion_seed) {
    for (Index k = 0; k < total && count < total; ++k) try_candidate(CVector::Unit(total, k));
  }
  Rng rng(completion_seed.value_or(0x6e61696d61726bULL));
  for (int attempt = 0; attempt < 100 * total && count < total; ++attempt) {
    try_candidate(rng.gaussian(total, 1).col(0));
  }
  if (count < total) {
    throw CoherenceError(ErrorKind::CompletionFailure, "could not complete the Naimark unitary");
  }

  // Column (b, 0) holds W e_b; completions fill (b, j) for j >= 1 in order.
  CMatrix v(total, total);
  Index next = d;
  for (Index j = 0; j < nn; ++j) {
    for (Index b = 0; b < d; ++b) v.col(b * nn + j) = j == 0 ? ortho.col(b) : ortho.col(next++);
  }

  NaimarkExtension ext{d, n, v, {}, register_measurement(d, n), register_measurement(d, n)};
  ext.a_blocks.assign(n, std::vector<CMatrix>(n, CMatrix(d, d)));
  for (Index i = 0; i < nn; ++i) {
    for (Index j = 0; j < nn; ++j) {
      CMatrix& block = ext.a_blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < d; ++b) block(a, b) = v(a * nn + i, b * nn + j);
      }
    }
  }
  std::vector<CMatrix> dilated;
  for (const auto& pbar : ext.pbar.projectors()) dilated.push_back(hermitian_part(v.adjoint() * pbar * v));
  ext.dilated = ProjectiveMeasurement::from_projectors(std::move(dilated));
  return ext;
}

EmbeddedOperator embed(const CMatrix& x, const Povm& e) {
  if (x.rows() != e.dim() || x.cols() != e.dim()) {
    throw CoherenceError(ErrorKind::DimMismatch, "embedded operator must match the POVM dimension");
  }
  const std::size_t n = e.size();
  const Index nn = static_cast<Index>(n);
  const Index d = e.dim();
  CMatrix out = CMatrix::Zero(d * nn, d * nn);
  for (Index i = 0; i < nn; ++i) {
    const CMatrix left = e.kraus()[static_cast<std::size_t>(i)] * x;
    for (Index j = 0; j < nn; ++j) {
      const CMatrix block = left * e.kraus()[static_cast<std::size_t>(j)].adjoint();
      for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < d; ++b) out(a * nn + i, b * nn + j) = block(a, b);
      }
    }
  }
  return {out, d, n};
}

DensityMatrix embed_state(const DensityMatrix& rho, const Povm& e) {
  return DensityMatrix::from_computed(embed(rho.mat(), e).mat);
}

NaimarkResiduals check_extension(const NaimarkExtension& ext, const Povm& e,
                                 const std::vector<DensityMatrix>& probes) {
  NaimarkResiduals r;
  const Index total = ext.v.rows();
  const CMatrix id = CMatrix::Identity(total, total);
  r.unitarity = std::max((ext.v.adjoint() * ext.v - id).norm(), (ext.v * ext.v.adjoint() - id).norm());
  const CMatrix id_d = CMatrix::Identity(ext.d, ext.d);
  for (std::size_t i = 0; i < ext.n; ++i) {
    r.first_column = std::max(r.first_column, (ext.a_blocks[i][0] - e.kraus()[i]).norm());
    for (std::size_t j = 0; j < ext.n; ++j) {
      CMatrix cols = CMatrix::Zero(ext.d, ext.d);
      CMatrix rows = CMatrix::Zero(ext.d, ext.d);
      for (std::size_t k = 0; k < ext.n; ++k) {
        cols += ext.a_blocks[k][i].adjoint() * ext.a_blocks[k][j];
        rows += ext.a_blocks[i][k] * ext.a_blocks[j][k].adjoint();
      }
      const CMatrix target = i == j ? id_d : CMatrix::Zero(ext.d, ext.d);
      r.column_orthogonality = std::max(r.column_orthogonality, (cols - target).norm());
      r.row_orthogonality = std::max(r.row_orthogonality, (rows - target).norm());
    }
  }
  for (const auto& rho : probes) {
    const CMatrix lifted = attach_register(rho.mat(), ext.n);
    const std::vector<double> expected = outcome_probabilities(rho, e);
    for (std::size_t i = 0; i < ext.n; ++i) {
      const double got = (ext.dilated.projector(i) * lifted).trace().real();
      r.statistics = std::max(r.statistics, std::abs(got - expected[i]));
    }
    const CMatrix direct = embed(rho.mat(), e).mat;
    r.embedding = std::max(r.embedding, (direct - ext.v * lifted * ext.v.adjoint()).norm());
  }
  return r;
}

}  // namespace coherence
