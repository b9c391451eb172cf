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

// States, measurements and channels, with validated constructors and seeded
// random generators.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "coherence/matcore.hpp"

namespace coherence {

/// Deterministic random stream. Every generator takes one explicitly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  Complex complex_normal() { return {normal(), normal()}; }
  double uniform() { return uniform_(engine_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::uint64_t next() { return engine_(); }

  CMatrix gaussian(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Independent stream seed for (seed, stream) pairs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class DensityMatrix {
 public:
  /// Validates: Hermitian within 1e-10, min eigenvalue >= -1e-9, |tr - 1| <= 1e-10.
  static DensityMatrix from_matrix(const CMatrix& m);
  static DensityMatrix maximally_mixed(Index dim);
  /// |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const CVector& psi);
  /// For matrices produced by trace-preserving computations: symmetrizes and
  /// rescales the trace after checking it is within 1e-9 of 1.
  static DensityMatrix from_computed(const CMatrix& m);

  Index dim() const { return mat_.rows(); }
  const CMatrix& mat() const { return mat_; }

 private:
  explicit DensityMatrix(CMatrix m) : mat_(std::move(m)) {}
  CMatrix mat_;
};

/// Complete set of orthogonal projectors. Keeps a unitary whose consecutive
/// column groups span the blocks, so block-diagonal data can be handled in
/// block coordinates.
class ProjectiveMeasurement {
 public:
  static ProjectiveMeasurement from_projectors(std::vector<CMatrix> projectors);
  /// Blocks spanned by consecutive column groups of a unitary.
  static ProjectiveMeasurement from_basis(const CMatrix& unitary, const std::vector<Index>& block_dims);
  /// Rank-1 computational basis.
  static ProjectiveMeasurement computational(Index dim);
  /// Computational basis grouped into consecutive blocks.
  static ProjectiveMeasurement contiguous_blocks(const std::vector<Index>& block_dims);

  Index dim() const { return basis_.rows(); }
  std::size_t size() const { return projectors_.size(); }
  const std::vector<CMatrix>& projectors() const { return projectors_; }
  const CMatrix& projector(std::size_t i) const { return projectors_[i]; }
  const std::vector<Index>& block_dims() const { return block_dims_; }
  /// Start column of block i in block coordinates; offsets()[size()] == dim().
  const std::vector<Index>& offsets() const { return offsets_; }
  const CMatrix& block_basis() const { return basis_; }
  /// Columns spanning block i.
  CMatrix block_columns(std::size_t i) const { return basis_.middleCols(offsets_[i], block_dims_[i]); }

  CMatrix to_block_coords(const CMatrix& x) const { return basis_.adjoint() * x * basis_; }
  CMatrix from_block_coords(const CMatrix& x) const { return basis_ * x * basis_.adjoint(); }

 private:
  ProjectiveMeasurement() = default;
  void validate() const;

  std::vector<CMatrix> projectors_;
  std::vector<Index> block_dims_;
  std::vector<Index> offsets_;
  CMatrix basis_;
};

class Povm {
 public:
  /// Kraus operators default to the principal square roots of the effects.
  static Povm from_effects(std::vector<CMatrix> effects);
  static Povm from_kraus(std::vector<CMatrix> kraus);
  static Povm from_effects_and_kraus(std::vector<CMatrix> effects, std::vector<CMatrix> kraus);

  /// Single-outcome {I}.
  static Povm trivial(Index dim);
  /// Rank-1 projective measurement in the computational basis.
  static Povm computational(Index dim);
  /// Qubit trine: E_k = (2/3)|psi_k><psi_k|, psi_k at angles 2 pi k / 3.
  static Povm trine();

  Index dim() const { return effects_.front().rows(); }
  std::size_t size() const { return effects_.size(); }
  const std::vector<CMatrix>& effects() const { return effects_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }

 private:
  Povm() = default;
  void validate() const;

  std::vector<CMatrix> effects_;
  std::vector<CMatrix> kraus_;
};

/// K_l = sum_i P_{f_l(i)} M_l P_i.
struct BiStructure {
  ProjectiveMeasurement measurement;
  std::vector<std::vector<std::size_t>> index_maps;
  std::vector<CMatrix> mats;
};

class KrausChannel {
 public:
  /// Validates completeness ||sum K^dag K - I||_F <= 1e-9.
  static KrausChannel from_kraus(std::vector<CMatrix> kraus);
  /// Additionally validates P_j K_l P_i = 0 for j != f_l(i).
  static KrausChannel with_bi_structure(std::vector<CMatrix> kraus, BiStructure structure);
  static KrausChannel identity(Index dim);
  /// Kraus operators {P_i}.
  static KrausChannel block_dephasing(const ProjectiveMeasurement& p);

  Index dim() const { return kraus_.front().cols(); }
  const std::vector<CMatrix>& kraus_ops() const { return kraus_; }
  const std::optional<BiStructure>& bi_structure() const { return structure_; }

 private:
  KrausChannel() = default;
  std::vector<CMatrix> kraus_;
  std::optional<BiStructure> structure_;
};

struct BranchOutcome {
  double probability;
  DensityMatrix state;
};

inline constexpr double kBranchDropThreshold = 1e-12;
inline constexpr double kIncoherenceTol = 1e-9;

DensityMatrix block_dephase(const DensityMatrix& rho, const ProjectiveMeasurement& p);
CMatrix block_dephase(const CMatrix& x, const ProjectiveMeasurement& p);

/// max_{i != j} ||P_i rho P_j||_F.
double off_block_norm(const CMatrix& rho, const ProjectiveMeasurement& p);
bool is_block_incoherent(const DensityMatrix& rho, const ProjectiveMeasurement& p,
                         double tol = kIncoherenceTol);

/// max_{i != j} ||E_i rho E_j||_F and max_{i != j} ||A_i rho A_j^dag||_F.
struct PovmIncoherenceResiduals {
  double effect_form;
  double kraus_form;
};
PovmIncoherenceResiduals povm_incoherence_residuals(const DensityMatrix& rho, const Povm& e);
bool is_povm_incoherent(const DensityMatrix& rho, const Povm& e, double tol = kIncoherenceTol);

/// tr(E_i rho) for every outcome.
std::vector<double> outcome_probabilities(const DensityMatrix& rho, const Povm& e);

DensityMatrix random_density(Index dim, Index rank, Rng& rng);
DensityMatrix random_density(Index dim, Index rank, std::uint64_t seed);
CMatrix random_unitary(Index dim, Rng& rng);
CMatrix random_unitary(Index dim, std::uint64_t seed);
ProjectiveMeasurement random_projective(Index dim, const std::vector<Index>& block_dims, Rng& rng);
ProjectiveMeasurement random_projective(Index dim, const std::vector<Index>& block_dims, std::uint64_t seed);
Povm random_povm(Index dim, std::size_t outcomes, Rng& rng);
Povm random_povm(Index dim, std::size_t outcomes, std::uint64_t seed);

/// Random state supported on the span of the selected blocks.
DensityMatrix random_density_on_blocks(const ProjectiveMeasurement& p,
                                       const std::vector<std::size_t>& blocks, Rng& rng);

/// Normalizes structured operators sum_i P_{f_l(i)} M_l P_i into a complete
/// channel. Non-injective maps are phase-twirled over the blocks so the
/// normalizing Gram matrix stays block diagonal.
KrausChannel bi_channel_from_structure(const ProjectiveMeasurement& p,
                                       const std::vector<std::vector<std::size_t>>& index_maps,
                                       const std::vector<CMatrix>& mats);
KrausChannel random_bi_channel(const ProjectiveMeasurement& p, std::size_t num_kraus, Rng& rng);
KrausChannel random_bi_channel(const ProjectiveMeasurement& p, std::size_t num_kraus, std::uint64_t seed);

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);
/// (p_l, K_l rho K_l^dag / p_l), dropping p_l < 1e-12.
std::vector<BranchOutcome> branches(const KrausChannel& ch, const DensityMatrix& rho);

/// p1 rho1 + p2 rho2 where rho1 lives on the blocks in `group1` and rho2 on
/// the rest. Throws SupportViolation if either support condition fails.
DensityMatrix direct_sum_state(double p1, const DensityMatrix& rho1, double p2, const DensityMatrix& rho2,
                               const ProjectiveMeasurement& p, const std::vector<std::size_t>& group1);

}  // namespace coherence
