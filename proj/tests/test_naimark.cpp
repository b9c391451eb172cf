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

#include <doctest.h>

#include "coherence/blockcoh.hpp"
#include "coherence/naimark.hpp"

using namespace coherence;

TEST_CASE("trine extension") {
  const Povm trine = Povm::trine();
  const NaimarkExtension ext = build_extension(trine);
  CHECK(ext.v.rows() == 6);
  std::vector<DensityMatrix> probes{DensityMatrix::maximally_mixed(2), random_density(2, 1, 3)};
  const NaimarkResiduals r = check_extension(ext, trine, probes);
  CHECK(r.unitarity <= 1e-10);
  CHECK(r.first_column <= 1e-10);
  CHECK(r.column_orthogonality <= 1e-9);
  CHECK(r.row_orthogonality <= 1e-9);
  CHECK(r.statistics <= 1e-9);
  CHECK(r.embedding <= 1e-9);
}

TEST_CASE("single-outcome POVM extends trivially") {
  const NaimarkExtension ext = build_extension(Povm::trivial(3));
  CHECK((ext.v - CMatrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("rank-1 projective POVM preserves statistics") {
  const Povm e = Povm::computational(3);
  const NaimarkExtension ext = build_extension(e);
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const DensityMatrix rho = random_density(3, 1 + k % 3, rng);
    const CMatrix dilated = attach_register(rho.mat(), e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double p = (ext.dilated.projector(i) * dilated).trace().real();
      CHECK(p == doctest::Approx((e.effects()[i] * rho.mat()).trace().real()).epsilon(1e-12));
    }
  }
}

TEST_CASE("embedding structure") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + static_cast<Index>(trial % 4);
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const Povm e = random_povm(d, n, rng);
    const DensityMatrix rho = random_density(d, d, rng);
    const CMatrix eps = embed(rho.mat(), e).mat;
    const ProjectiveMeasurement pbar = register_measurement(d, n);
    CHECK(eps.rows() == d * static_cast<Index>(n));
    CHECK(std::abs(eps.trace() - 1.0) < 1e-10);
    CHECK(eigvalsh(hermitian_part(eps)).minCoeff() >= -1e-9);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = (pbar.projector(i) * eps).trace().real();
      CHECK(p == doctest::Approx((e.effects()[i] * rho.mat()).trace().real()).epsilon(1e-10));
    }
    const CMatrix h = hermitian_part(rng.gaussian(d, d));
    CHECK(hermiticity_residual(embed(h, e).mat) < 1e-12);
  }
}

TEST_CASE("completions differ but measures agree") {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const Povm e = random_povm(3, 3, rng);
    const NaimarkExtension a = build_extension(e);
    const NaimarkExtension b = build_extension(e, rng.next());
    CHECK((a.v - b.v).norm() > 1e-3);
    const std::vector<DensityMatrix> probes{random_density(3, 2, rng)};
    CHECK(check_extension(b, e, probes).unitarity <= 1e-10);
    CHECK(check_extension(b, e, probes).embedding <= 1e-9);
    const CMatrix in = attach_register(probes[0].mat(), 3);
    const auto sa = DensityMatrix::from_computed(a.v * in * a.v.adjoint());
    const auto sb = DensityMatrix::from_computed(b.v * in * b.v.adjoint());
    CHECK(std::abs(c_l1_block(sa, a.pbar).value - c_l1_block(sb, b.pbar).value) <= 1e-9);
  }
}

TEST_CASE("extension blocks satisfy the unitarity sums") {
  const Povm e = random_povm(2, 4, 77);
  const NaimarkExtension ext = build_extension(e);
  for (std::size_t j = 0; j < e.size(); ++j) {
    for (std::size_t k = 0; k < e.size(); ++k) {
      CMatrix sum = CMatrix::Zero(2, 2);
      for (std::size_t i = 0; i < e.size(); ++i) sum += ext.a_blocks[i][j].adjoint() * ext.a_blocks[i][k];
      const CMatrix expected = CMatrix::Identity(2, 2) * (j == k ? 1.0 : 0.0);
      CHECK((sum - expected).norm() <= 1e-9);
    }
  }
  for (std::size_t i = 0; i < e.size(); ++i) CHECK((ext.a_blocks[i][0] - e.kraus()[i]).norm() <= 1e-10);
}
