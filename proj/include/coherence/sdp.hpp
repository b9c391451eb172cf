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

// Small dense primal-dual interior point solver for Hermitian block SDPs.
//
//   maximize    b^T y
//   subject to  S = C - sum_k y_k A_k  is PSD        (y real)
//
// with the conic dual
//
//   minimize    tr(C X)
//   subject to  Re tr(A_k X) = b_k,  X PSD.
//
// C, A_k, X and S are block diagonal with Hermitian blocks. The A_k are
// stored as sparse entry lists, which keeps the Schur complement assembly
// cheap for the coordinate bases the coherence problems use.

#include <vector>

#include "coherence/matcore.hpp"

namespace coherence::sdp {

struct Entry {
  int block;
  Index row;
  Index col;
  Complex value;
};

struct Problem {
  std::vector<Index> block_sizes;
  std::vector<CMatrix> c;
  /// One sparse Hermitian matrix per variable; both (r, c) and (c, r) entries
  /// must be listed for off-diagonal positions.
  std::vector<std::vector<Entry>> a;
  RVector b;

  Index num_vars() const { return static_cast<Index>(a.size()); }
};

struct Options {
  double gap_tol = 1e-10;
  double feas_tol = 1e-10;
  int max_iter = 100;
};

enum class Status { Optimal, MaxIterations, NumericalFailure };

struct Solution {
  RVector y;
  std::vector<CMatrix> x;
  std::vector<CMatrix> s;
  double primal_objective = 0.0;  // tr(C X)
  double dual_objective = 0.0;    // b^T y
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
  Status status = Status::NumericalFailure;
};

Solution solve(const Problem& problem, const Options& options = {});

/// Variables describing a Hermitian matrix of the given size: diagonal
/// entries, then real and imaginary parts of the strict upper triangle.
struct HermitianCoords {
  Index size;
  Index first_var;
  Index count() const { return size * size; }
};

/// Appends the coordinate basis of a size x size Hermitian block to `vars`
/// with the given sign, placed in `block` at offset (row0, row0).
void add_hermitian_basis(std::vector<std::vector<Entry>>& vars, const HermitianCoords& coords, int block,
                         Index row0, double sign);

CMatrix assemble_hermitian(const RVector& y, const HermitianCoords& coords);

}  // namespace coherence::sdp
