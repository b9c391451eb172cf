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

#pragma once

// Dense complex linear algebra for small Hermitian problems.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "coherence/error.hpp"

namespace coherence {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative eigenvalue floor defining the numerical support of a PSD matrix.
inline constexpr double kEigFloor = 1e-12;
inline constexpr double kHermitianTol = 1e-10;

/// Eigenvalues sorted descending, eigenvectors as the matching unitary columns.
struct EigenSystem {
  RVector values;
  CMatrix vectors;
};

bool all_finite(const CMatrix& m);

/// ||h - h^dag||_F.
double hermiticity_residual(const CMatrix& h);

CMatrix hermitian_part(const CMatrix& h);

/// Hermitian eigendecomposition. Throws NotHermitian when
/// ||h - h^dag||_F > 1e-10 max(1, ||h||_F).
EigenSystem eigh(const CMatrix& h);

/// Eigenvalues only, descending.
RVector eigvalsh(const CMatrix& h);

/// Sum of singular values.
double trace_norm(const CMatrix& m);

/// h^t on the numerical support of h. Eigenvalues below
/// floor * max(lambda_max, scale) map to 0 for every t, so t = 0 yields the
/// support projector and negative t is a pseudo-inverse power. A positive
/// scale measures the floor against a parent matrix, e.g. for a sub-block.
CMatrix psd_power(const CMatrix& h, double t, double floor = kEigFloor, double scale = 0.0);

/// log2 on the support, 0 on the kernel.
CMatrix psd_log2(const CMatrix& h, double floor = kEigFloor);

/// tr(h log2 h) with 0 log 0 = 0.
double trace_xlog2x(const CMatrix& h, double floor = kEigFloor);

/// sum_j x_j log2 x_j over positive entries.
double xlog2x_sum(const RVector& values);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// |i><j| in dimension n.
CMatrix ket_bra(Index n, Index i, Index j);

/// Checks the PSD tolerances and returns the eigenvalues. Throws NotPsd when
/// the smallest eigenvalue is below -1e-8 max(1, lambda_max).
RVector checked_psd_eigenvalues(const EigenSystem& es);

}  // namespace coherence
