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

#include "coherence/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

namespace coherence {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw CoherenceError(ErrorKind::DimMismatch, std::string(what) + " must be a non-empty square matrix");
  }
  if (!m.allFinite()) {
    throw CoherenceError(ErrorKind::InvalidArgument, std::string(what) + " has non-finite entries");
  }
}

void require_dims(Index a, Index b, const char* what) {
  if (a != b) {
    throw CoherenceError(ErrorKind::DimMismatch,
                         std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

void check_state_spectrum(const CMatrix& m, double min_eig) {
  const RVector lambda = eigvalsh(m);
  if (lambda(lambda.size() - 1) < min_eig) {
    throw CoherenceError(ErrorKind::NotPsd,
                         "state has eigenvalue " + std::to_string(lambda(lambda.size() - 1)));
  }
}

double condition_number(const CMatrix& h) {
  const RVector lambda = eigvalsh(h);
  const double low = lambda(lambda.size() - 1);
  if (low <= 0.0) return std::numeric_limits<double>::infinity();
  return lambda(0) / low;
}

constexpr int kMaxResamples = 10;
constexpr double kMaxCondition = 1e12;

}  // namespace

CMatrix Rng::gaussian(Index rows, Index cols) {
  CMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = complex_normal();
  }
  return g;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined key.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// --- DensityMatrix ---------------------------------------------------------

DensityMatrix DensityMatrix::from_matrix(const CMatrix& m) {
  require_square(m, "density matrix");
  if (hermiticity_residual(m) > kHermitianTol) {
    throw CoherenceError(ErrorKind::InvariantViolation, "density matrix is not Hermitian");
  }
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > 1e-10) {
    throw CoherenceError(ErrorKind::InvariantViolation,
                         "density matrix trace " + std::to_string(tr.real()) + " != 1");
  }
  CMatrix herm = hermitian_part(m);
  check_state_spectrum(herm, -1e-9);
  return DensityMatrix(std::move(herm));
}

DensityMatrix DensityMatrix::from_computed(const CMatrix& m) {
  require_square(m, "density matrix");
  if (hermiticity_residual(m) > 1e-9 * std::max(1.0, m.norm())) {
    throw CoherenceError(ErrorKind::InvariantViolation, "computed state is not Hermitian");
  }
  CMatrix herm = hermitian_part(m);
  const double tr = herm.trace().real();
  if (std::abs(tr - 1.0) > 1e-9) {
    throw CoherenceError(ErrorKind::InvariantViolation,
                         "computed state has trace " + std::to_string(tr));
  }
  herm /= tr;
  check_state_spectrum(herm, -1e-9);
  return DensityMatrix(std::move(herm));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  if (dim < 1) throw CoherenceError(ErrorKind::InvalidArgument, "dimension must be >= 1");
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double norm = psi.norm();
  if (psi.size() == 0 || !(norm > 0.0) || !psi.allFinite()) {
    throw CoherenceError(ErrorKind::InvalidArgument, "pure state needs a finite non-zero vector");
  }
  const CVector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint());
}

// --- ProjectiveMeasurement -------------------------------------------------

ProjectiveMeasurement ProjectiveMeasurement::from_projectors(std::vector<CMatrix> projectors) {
  if (projectors.empty()) {
    throw CoherenceError(ErrorKind::InvalidArgument, "measurement needs at least one projector");
  }
  const Index dim = projectors.front().rows();
  ProjectiveMeasurement p;
  p.offsets_.push_back(0);
  p.basis_ = CMatrix(dim, dim);
  Index filled = 0;
  for (auto& proj : projectors) {
    require_square(proj, "projector");
    require_dims(proj.rows(), dim, "projector dimension");
    if (hermiticity_residual(proj) > kHermitianTol) {
      throw CoherenceError(ErrorKind::InvariantViolation, "projector is not Hermitian");
    }
    proj = hermitian_part(proj);
    const Index rank = static_cast<Index>(std::lround(proj.trace().real()));
    if (rank < 1 || filled + rank > dim) {
      throw CoherenceError(ErrorKind::InvariantViolation, "projector ranks do not fit the dimension");
    }
    const EigenSystem es = eigh(proj);
    p.basis_.middleCols(filled, rank) = es.vectors.leftCols(rank);
    filled += rank;
    p.block_dims_.push_back(rank);
    p.offsets_.push_back(filled);
  }
  if (filled != dim) {
    throw CoherenceError(ErrorKind::InvariantViolation, "projector ranks do not sum to the dimension");
  }
  p.projectors_ = std::move(projectors);
  p.validate();
  return p;
}

ProjectiveMeasurement ProjectiveMeasurement::from_basis(const CMatrix& unitary,
                                                        const std::vector<Index>& block_dims) {
  require_square(unitary, "basis");
  const Index dim = unitary.rows();
  if ((unitary.adjoint() * unitary - CMatrix::Identity(dim, dim)).norm() > kHermitianTol) {
    throw CoherenceError(ErrorKind::InvariantViolation, "basis is not unitary");
  }
  ProjectiveMeasurement p;
  p.basis_ = unitary;
  p.offsets_.push_back(0);
  Index filled = 0;
  for (Index m : block_dims) {
    if (m < 1 || filled + m > dim) {
      throw CoherenceError(ErrorKind::InvalidArgument, "block dimensions do not fit the basis");
    }
    const CMatrix cols = unitary.middleCols(filled, m);
    p.projectors_.push_back(cols * cols.adjoint());
    p.block_dims_.push_back(m);
    filled += m;
    p.offsets_.push_back(filled);
  }
  if (filled != dim) {
    throw CoherenceError(ErrorKind::InvalidArgument, "block dimensions must sum to the dimension");
  }
  p.validate();
  return p;
}

ProjectiveMeasurement ProjectiveMeasurement::computational(Index dim) {
  return from_basis(CMatrix::Identity(dim, dim), std::vector<Index>(static_cast<std::size_t>(dim), 1));
}

ProjectiveMeasurement ProjectiveMeasurement::contiguous_blocks(const std::vector<Index>& block_dims) {
  Index dim = 0;
  for (Index m : block_dims) dim += m;
  return from_basis(CMatrix::Identity(dim, dim), block_dims);
}

void ProjectiveMeasurement::validate() const {
  const Index dim = basis_.rows();
  CMatrix total = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const CMatrix& pi = projectors_[i];
    if ((pi * pi - pi).norm() > kHermitianTol) {
      throw CoherenceError(ErrorKind::InvariantViolation,
                           "projector " + std::to_string(i) + " is not idempotent");
    }
    for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
      if ((pi * projectors_[j]).norm() > kHermitianTol) {
        throw CoherenceError(ErrorKind::InvariantViolation, "projectors are not mutually orthogonal");
      }
    }
    total += pi;
  }
  if ((total - CMatrix::Identity(dim, dim)).norm() > kHermitianTol) {
    throw CoherenceError(ErrorKind::InvariantViolation, "projectors do not sum to the identity");
  }
}

// --- Povm ------------------------------------------------------------------

Povm Povm::from_effects(std::vector<CMatrix> effects) {
  std::vector<CMatrix> kraus;
  kraus.reserve(effects.size());
  for (const auto& e : effects) {
    require_square(e, "effect");
    kraus.push_back(psd_power(e, 0.5));
  }
  return from_effects_and_kraus(std::move(effects), std::move(kraus));
}

Povm Povm::from_kraus(std::vector<CMatrix> kraus) {
  std::vector<CMatrix> effects;
  effects.reserve(kraus.size());
  for (const auto& a : kraus) {
    require_square(a, "Kraus operator");
    effects.push_back(hermitian_part(a.adjoint() * a));
  }
  return from_effects_and_kraus(std::move(effects), std::move(kraus));
}

Povm Povm::from_effects_and_kraus(std::vector<CMatrix> effects, std::vector<CMatrix> kraus) {
  if (effects.empty() || effects.size() != kraus.size()) {
    throw CoherenceError(ErrorKind::InvalidArgument, "POVM needs matching non-empty effect and Kraus lists");
  }
  const Index dim = effects.front().rows();
  for (std::size_t i = 0; i < effects.size(); ++i) {
    require_square(effects[i], "effect");
    require_square(kraus[i], "Kraus operator");
    require_dims(effects[i].rows(), dim, "effect dimension");
    require_dims(kraus[i].rows(), dim, "Kraus dimension");
    if (hermiticity_residual(effects[i]) > kHermitianTol) {
      throw CoherenceError(ErrorKind::InvariantViolation, "effect is not Hermitian");
    }
    effects[i] = hermitian_part(effects[i]);
  }
  Povm e;
  e.effects_ = std::move(effects);
  e.kraus_ = std::move(kraus);
  e.validate();
  return e;
}

void Povm::validate() const {
  const Index dim = effects_.front().rows();
  const CMatrix id = CMatrix::Identity(dim, dim);
  CMatrix effect_sum = CMatrix::Zero(dim, dim);
  CMatrix kraus_sum = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < effects_.size(); ++i) {
    const RVector lambda = eigvalsh(effects_[i]);
    if (lambda(lambda.size() - 1) < -1e-10) {
      throw CoherenceError(ErrorKind::NotPsd, "effect " + std::to_string(i) + " is not PSD");
    }
    const CMatrix gram = kraus_[i].adjoint() * kraus_[i];
    if ((gram - effects_[i]).norm() > 1e-9) {
      throw CoherenceError(ErrorKind::InvariantViolation,
                           "Kraus operator " + std::to_string(i) + " does not match its effect");
    }
    effect_sum += effects_[i];
    kraus_sum += gram;
  }
  if ((effect_sum - id).norm() > 1e-10) {
    throw CoherenceError(ErrorKind::InvariantViolation, "effects do not sum to the identity");
  }
  if ((kraus_sum - id).norm() > 1e-9) {
    throw CoherenceError(ErrorKind::InvariantViolation, "Kraus operators are not complete");
  }
}

Povm Povm::trivial(Index dim) {
  return from_effects_and_kraus({CMatrix::Identity(dim, dim)}, {CMatrix::Identity(dim, dim)});
}

Povm Povm::computational(Index dim) {
  std::vector<CMatrix> ops;
  for (Index i = 0; i < dim; ++i) ops.push_back(ket_bra(dim, i, i));
  return from_effects_and_kraus(ops, ops);
}

Povm Povm::trine() {
  std::vector<CMatrix> effects;
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 3.0;
    CVector psi(2);
    psi << std::cos(angle), std::sin(angle);
    effects.push_back((2.0 / 3.0) * psi * psi.adjoint());
  }
  // The effects are rank-1 with a single real vector, so the rounding error in
  // the sum stays well below the 1e-10 completeness tolerance.
  return from_effects(std::move(effects));
}

// --- KrausChannel ----------------------------------------------------------

KrausChannel KrausChannel::from_kraus(std::vector<CMatrix> kraus) {
  if (kraus.empty()) {
    throw CoherenceError(ErrorKind::InvalidArgument, "channel needs at least one Kraus operator");
  }
  const Index dim = kraus.front().cols();
  CMatrix total = CMatrix::Zero(dim, dim);
  for (const auto& k : kraus) {
    require_dims(k.cols(), dim, "Kraus input dimension");
    require_dims(k.rows(), dim, "Kraus output dimension");
    total += k.adjoint() * k;
  }
  if ((total - CMatrix::Identity(dim, dim)).norm() > 1e-9) {
    throw CoherenceError(ErrorKind::InvariantViolation, "Kraus operators are not complete");
  }
  KrausChannel ch;
  ch.kraus_ = std::move(kraus);
  return ch;
}

KrausChannel KrausChannel::with_bi_structure(std::vector<CMatrix> kraus, BiStructure structure) {
  KrausChannel ch = from_kraus(std::move(kraus));
  const auto& p = structure.measurement;
  require_dims(p.dim(), ch.dim(), "structure measurement dimension");
  if (structure.index_maps.size() != ch.kraus_.size() || structure.mats.size() != ch.kraus_.size()) {
    throw CoherenceError(ErrorKind::InvalidArgument, "structure must describe every Kraus operator");
  }
  for (std::size_t l = 0; l < ch.kraus_.size(); ++l) {
    const auto& f = structure.index_maps[l];
    if (f.size() != p.size()) {
      throw CoherenceError(ErrorKind::InvalidArgument, "index map must cover every block");
    }
    const CMatrix k = p.to_block_coords(ch.kraus_[l]);
    const double scale = std::max(1.0, k.norm());
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (j == f[i]) continue;
        const double leak = k.block(p.offsets()[j], p.offsets()[i], p.block_dims()[j], p.block_dims()[i]).norm();
        if (leak > 1e-9 * scale) {
          throw CoherenceError(ErrorKind::InvariantViolation,
                               "Kraus operator " + std::to_string(l) + " maps block " + std::to_string(i) +
                                   " outside block " + std::to_string(f[i]));
        }
      }
    }
  }
  ch.structure_ = std::move(structure);
  return ch;
}

KrausChannel KrausChannel::identity(Index dim) {
  return from_kraus({CMatrix::Identity(dim, dim)});
}

KrausChannel KrausChannel::block_dephasing(const ProjectiveMeasurement& p) {
  std::vector<std::size_t> id(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) id[i] = i;
  BiStructure structure{p, {}, {}};
  for (std::size_t i = 0; i < p.size(); ++i) {
    structure.index_maps.push_back(id);
    structure.mats.push_back(p.projector(i));
  }
  return with_bi_structure(p.projectors(), std::move(structure));
}

// --- incoherence -----------------------------------------------------------

CMatrix block_dephase(const CMatrix& x, const ProjectiveMeasurement& p) {
  require_dims(x.rows(), p.dim(), "block_dephase");
  CMatrix coords = p.to_block_coords(x);
  CMatrix diag = CMatrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Index o = p.offsets()[i];
    const Index m = p.block_dims()[i];
    diag.block(o, o, m, m) = coords.block(o, o, m, m);
  }
  return p.from_block_coords(diag);
}

DensityMatrix block_dephase(const DensityMatrix& rho, const ProjectiveMeasurement& p) {
  return DensityMatrix::from_computed(block_dephase(rho.mat(), p));
}

double off_block_norm(const CMatrix& rho, const ProjectiveMeasurement& p) {
  require_dims(rho.rows(), p.dim(), "off_block_norm");
  const CMatrix coords = p.to_block_coords(rho);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (i == j) continue;
      worst = std::max(
          worst, coords.block(p.offsets()[i], p.offsets()[j], p.block_dims()[i], p.block_dims()[j]).norm());
    }
  }
  return worst;
}

bool is_block_incoherent(const DensityMatrix& rho, const ProjectiveMeasurement& p, double tol) {
  return off_block_norm(rho.mat(), p) <= tol;
}

PovmIncoherenceResiduals povm_incoherence_residuals(const DensityMatrix& rho, const Povm& e) {
  require_dims(rho.dim(), e.dim(), "POVM incoherence");
  PovmIncoherenceResiduals r{0.0, 0.0};
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (i == j) continue;
      r.effect_form = std::max(r.effect_form, (e.effects()[i] * rho.mat() * e.effects()[j]).norm());
      r.kraus_form = std::max(r.kraus_form, (e.kraus()[i] * rho.mat() * e.kraus()[j].adjoint()).norm());
    }
  }
  return r;
}

bool is_povm_incoherent(const DensityMatrix& rho, const Povm& e, double tol) {
  return povm_incoherence_residuals(rho, e).effect_form <= tol;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho, const Povm& e) {
  require_dims(rho.dim(), e.dim(), "outcome probabilities");
  std::vector<double> probs;
  for (const auto& effect : e.effects()) probs.push_back((effect * rho.mat()).trace().real());
  return probs;
}

// --- random generation -----------------------------------------------------

DensityMatrix random_density(Index dim, Index rank, Rng& rng) {
  if (dim < 1 || rank < 1 || rank > dim) {
    throw CoherenceError(ErrorKind::InvalidArgument, "random_density needs 1 <= rank <= dim");
  }
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const CMatrix g = rng.gaussian(dim, rank);
    if (condition_number(g.adjoint() * g) > kMaxCondition) continue;
    const CMatrix m = g * g.adjoint();
    return DensityMatrix::from_computed(m / m.trace().real());
  }
  throw CoherenceError(ErrorKind::DegenerateSample, "random_density: ill-conditioned samples");
}

DensityMatrix random_density(Index dim, Index rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dim, rank, rng);
}

CMatrix random_unitary(Index dim, Rng& rng) {
  if (dim < 1) throw CoherenceError(ErrorKind::InvalidArgument, "dimension must be >= 1");
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const CMatrix g = rng.gaussian(dim, dim);
    Eigen::HouseholderQR<CMatrix> qr(g);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    CMatrix q = qr.householderQ();
    bool degenerate = false;
    for (Index j = 0; j < dim; ++j) {
      const double mag = std::abs(r(j, j));
      if (mag < 1e-12) {
        degenerate = true;
        break;
      }
      q.col(j) *= r(j, j) / mag;
    }
    if (!degenerate) return q;
  }
  throw CoherenceError(ErrorKind::DegenerateSample, "random_unitary: singular samples");
}

CMatrix random_unitary(Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(dim, rng);
}

ProjectiveMeasurement random_projective(Index dim, const std::vector<Index>& block_dims, Rng& rng) {
  Index total = 0;
  for (Index m : block_dims) total += m;
  if (total != dim || block_dims.empty()) {
    throw CoherenceError(ErrorKind::InvalidArgument, "block dimensions must sum to the dimension");
  }
  return ProjectiveMeasurement::from_basis(random_unitary(dim, rng), block_dims);
}

ProjectiveMeasurement random_projective(Index dim, const std::vector<Index>& block_dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_projective(dim, block_dims, rng);
}

Povm random_povm(Index dim, std::size_t outcomes, Rng& rng) {
  if (dim < 1 || outcomes < 1) {
    throw CoherenceError(ErrorKind::InvalidArgument, "random_povm needs dim >= 1 and n >= 1");
  }
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    std::vector<CMatrix> b;
    CMatrix s = CMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < outcomes; ++i) {
      b.push_back(rng.gaussian(dim, dim));
      s += b.back().adjoint() * b.back();
    }
    s = hermitian_part(s);
    if (condition_number(s) > kMaxCondition) continue;
    const CMatrix s_inv_sqrt = psd_power(s, -0.5);
    std::vector<CMatrix> kraus;
    std::vector<CMatrix> effects;
    for (const auto& bi : b) {
      kraus.push_back(bi * s_inv_sqrt);
      effects.push_back(hermitian_part(kraus.back().adjoint() * kraus.back()));
    }
    return Povm::from_effects_and_kraus(std::move(effects), std::move(kraus));
  }
  throw CoherenceError(ErrorKind::DegenerateSample, "random_povm: ill-conditioned samples");
}

Povm random_povm(Index dim, std::size_t outcomes, std::uint64_t seed) {
  Rng rng(seed);
  return random_povm(dim, outcomes, rng);
}

DensityMatrix random_density_on_blocks(const ProjectiveMeasurement& p, const std::vector<std::size_t>& blocks,
                                       Rng& rng) {
  Index rank = 0;
  for (std::size_t i : blocks) {
    if (i >= p.size()) throw CoherenceError(ErrorKind::InvalidArgument, "block index out of range");
    rank += p.block_dims()[i];
  }
  if (rank == 0) throw CoherenceError(ErrorKind::InvalidArgument, "no blocks selected");
  CMatrix w(p.dim(), rank);
  Index col = 0;
  for (std::size_t i : blocks) {
    w.middleCols(col, p.block_dims()[i]) = p.block_columns(i);
    col += p.block_dims()[i];
  }
  const DensityMatrix inner = random_density(rank, rank, rng);
  return DensityMatrix::from_computed(w * inner.mat() * w.adjoint());
}

KrausChannel bi_channel_from_structure(const ProjectiveMeasurement& p,
                                       const std::vector<std::vector<std::size_t>>& index_maps,
                                       const std::vector<CMatrix>& mats) {
  if (index_maps.empty() || index_maps.size() != mats.size()) {
    throw CoherenceError(ErrorKind::InvalidArgument, "need one matrix per index map");
  }
  const std::size_t n = p.size();
  const Index dim = p.dim();

  std::vector<std::vector<std::size_t>> maps;
  std::vector<CMatrix> twirled;
  for (std::size_t l = 0; l < index_maps.size(); ++l) {
    const auto& f = index_maps[l];
    require_dims(mats[l].rows(), dim, "structure matrix");
    require_dims(mats[l].cols(), dim, "structure matrix");
    if (f.size() != n || std::any_of(f.begin(), f.end(), [n](std::size_t v) { return v >= n; })) {
      throw CoherenceError(ErrorKind::InvalidArgument, "index map must send blocks to blocks");
    }
    const bool injective = std::set<std::size_t>(f.begin(), f.end()).size() == n;
    if (injective) {
      maps.push_back(f);
      twirled.push_back(mats[l]);
      continue;
    }
    // Phases exp(2 pi i t i / n) on source block i cancel the cross terms
    // P_i M^dag P_k M P_j (i != j, f(i) = f(j) = k) in the summed Gram matrix.
    for (std::size_t t = 0; t < n; ++t) {
      CMatrix phases = CMatrix::Zero(dim, dim);
      for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(t * i) / static_cast<double>(n);
        phases += std::polar(1.0, angle) * p.projector(i);
      }
      maps.push_back(f);
      twirled.push_back(mats[l] * phases / std::sqrt(static_cast<double>(n)));
    }
  }

  std::vector<CMatrix> raw;
  CMatrix gram = CMatrix::Zero(dim, dim);
  for (std::size_t l = 0; l < maps.size(); ++l) {
    CMatrix k = CMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) k += p.projector(maps[l][i]) * twirled[l] * p.projector(i);
    gram += k.adjoint() * k;
    raw.push_back(std::move(k));
  }
  gram = hermitian_part(gram);
  if (off_block_norm(gram, p) > 1e-9 * std::max(1.0, gram.norm())) {
    throw CoherenceError(ErrorKind::InvariantViolation, "structured Gram matrix is not block diagonal");
  }
  if (condition_number(gram) > kMaxCondition) {
    throw CoherenceError(ErrorKind::DegenerateSample, "structured Kraus operators are rank deficient");
  }
  // Block diagonal, so right-multiplication keeps every operator's structure.
  const CMatrix normalizer = psd_power(gram, -0.5);
  BiStructure structure{p, maps, {}};
  for (std::size_t l = 0; l < raw.size(); ++l) {
    raw[l] = raw[l] * normalizer;
    structure.mats.push_back(twirled[l] * normalizer);
  }
  return KrausChannel::with_bi_structure(std::move(raw), std::move(structure));
}

KrausChannel random_bi_channel(const ProjectiveMeasurement& p, std::size_t num_kraus, Rng& rng) {
  if (num_kraus < 1) throw CoherenceError(ErrorKind::InvalidArgument, "num_kraus must be >= 1");
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    // Block i can only be mapped isometrically when its images have enough
    // room: sum_l m_{f_l(i)} >= m_i. Maps are uniform conditioned on that.
    std::vector<std::vector<std::size_t>> maps(num_kraus, std::vector<std::size_t>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (;;) {
        Index room = 0;
        for (auto& f : maps) room += p.block_dims()[f[i] = rng.index(p.size())];
        if (room >= p.block_dims()[i]) break;
      }
    }
    std::vector<CMatrix> mats;
    for (std::size_t l = 0; l < num_kraus; ++l) mats.push_back(rng.gaussian(p.dim(), p.dim()));
    try {
      return bi_channel_from_structure(p, maps, mats);
    } catch (const CoherenceError& err) {
      if (err.kind() != ErrorKind::DegenerateSample) throw;
    }
  }
  throw CoherenceError(ErrorKind::DegenerateSample, "random_bi_channel: degenerate samples");
}

KrausChannel random_bi_channel(const ProjectiveMeasurement& p, std::size_t num_kraus, std::uint64_t seed) {
  Rng rng(seed);
  return random_bi_channel(p, num_kraus, rng);
}

// --- channel application ---------------------------------------------------

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  require_dims(ch.dim(), rho.dim(), "apply_channel");
  CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : ch.kraus_ops()) out += k * rho.mat() * k.adjoint();
  return DensityMatrix::from_computed(out);
}

std::vector<BranchOutcome> branches(const KrausChannel& ch, const DensityMatrix& rho) {
  require_dims(ch.dim(), rho.dim(), "branches");
  std::vector<BranchOutcome> out;
  for (const auto& k : ch.kraus_ops()) {
    const CMatrix branch = k * rho.mat() * k.adjoint();
    const double prob = branch.trace().real();
    if (prob < kBranchDropThreshold) continue;
    out.push_back({prob, DensityMatrix::from_computed(branch / prob)});
  }
  return out;
}

DensityMatrix direct_sum_state(double p1, const DensityMatrix& rho1, double p2, const DensityMatrix& rho2,
                               const ProjectiveMeasurement& p, const std::vector<std::size_t>& group1) {
  if (!(p1 > 0.0) || !(p2 > 0.0) || std::abs(p1 + p2 - 1.0) > 1e-12) {
    throw CoherenceError(ErrorKind::InvalidArgument, "direct sum needs p1, p2 > 0 with p1 + p2 = 1");
  }
  require_dims(rho1.dim(), p.dim(), "direct sum first state");
  require_dims(rho2.dim(), p.dim(), "direct sum second state");
  std::vector<bool> in_group1(p.size(), false);
  for (std::size_t k : group1) {
    if (k >= p.size()) throw CoherenceError(ErrorKind::InvalidArgument, "block index out of range");
    in_group1[k] = true;
  }
  for (std::size_t k = 0; k < p.size(); ++k) {
    const DensityMatrix& other = in_group1[k] ? rho2 : rho1;
    if ((other.mat() * p.projector(k)).norm() > 1e-9) {
      throw CoherenceError(ErrorKind::SupportViolation,
                           "state has weight on block " + std::to_string(k) + " of the other group");
    }
  }
  return DensityMatrix::from_computed(p1 * rho1.mat() + p2 * rho2.mat());
}

}  // namespace coherence
