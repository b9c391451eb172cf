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

// Canonical Naimark extension of a POVM and the embedding map
//   eps(X) = sum_ij A_i X A_j^dag (x) |i><j|
// on H (x) H_R. Index (a, i) of H (x) H_R sits at a * n + i; register state
// |1> is index 0.

#include <cstdint>
#include <optional>
#include <vector>

#include "coherence/quantum.hpp"

namespace coherence {

struct NaimarkExtension {
  Index d = 0;
  std::size_t n = 0;
  CMatrix v;
  /// a_blocks[i][j] = (I (x) <i|) V (I (x) |j>).
  std::vector<std::vector<CMatrix>> a_blocks;
  /// {I_d (x) |i><i|}.
  ProjectiveMeasurement pbar;
  /// {V^dag Pbar_i V}.
  ProjectiveMeasurement dilated;
};

struct NaimarkResiduals {
  double unitarity = 0.0;          // max(||V^dag V - I||_F, ||V V^dag - I||_F)
  double first_column = 0.0;       // max_i ||A_i1 - A_i||_F
  double column_orthogonality = 0.0;  // max_jk ||sum_i A_ij^dag A_ik - delta_jk I||_F
  double row_orthogonality = 0.0;     // max_ij ||sum_k A_ik A_jk^dag - delta_ij I||_F
  double statistics = 0.0;         // max_i |tr[P_i (rho (x) |1><1|)] - tr(E_i rho)| over probe states
  double embedding = 0.0;          // max ||eps(rho) - V (rho (x) |1><1|) V^dag||_F over probe states
};

/// Builds V with the isometry W = sum_i A_i (x) |i> in the register-|1>
/// columns. The remaining columns are completed by Gram-Schmidt over the
/// standard basis in a fixed order; a seeded Gaussian candidate stream is used
/// as fallback, or from the start when `completion_seed` is given.
NaimarkExtension build_extension(const Povm& e, std::optional<std::uint64_t> completion_seed = std::nullopt);

/// The register measurement {I_d (x) |i><i|}.
ProjectiveMeasurement register_measurement(Index d, std::size_t n);

/// rho (x) |1><1|.
CMatrix attach_register(const CMatrix& x, std::size_t n);

struct EmbeddedOperator {
  CMatrix mat;
  Index source_dim = 0;
  std::size_t outcomes = 0;
};

/// sum_ij A_i x A_j^dag (x) |i><j|, linear in x.
EmbeddedOperator embed(const CMatrix& x, const Povm& e);
DensityMatrix embed_state(const DensityMatrix& rho, const Povm& e);

/// Invariant residuals, probing statistics and embedding with the given states.
NaimarkResiduals check_extension(const NaimarkExtension& ext, const Povm& e,
                                 const std::vector<DensityMatrix>& probes);

}  // namespace coherence
