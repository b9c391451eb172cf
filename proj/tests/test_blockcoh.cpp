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
#include "oracles.hpp"

using namespace coherence;

namespace {

DensityMatrix plus() { return DensityMatrix::pure(CVector::Ones(2)); }

MeasureParams tight(double alpha = 0.5) {
  MeasureParams p;
  p.alpha = alpha;
  p.solver.gap_tol = 1e-10;
  return p;
}

}  // namespace

TEST_CASE("golden values for the plus state") {
  const auto basis = ProjectiveMeasurement::computational(2);
  CHECK(c_l1_block(plus(), basis).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c_rel_block(plus(), basis).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c_tsallis_block(plus(), basis, 2.0).value == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(c_trace_block(plus(), basis).value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(c_weight_block(plus(), basis).value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(c_renyi_block(plus(), basis, tight()).value == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("maximally mixed states are incoherent") {
  for (const auto& dims : std::vector<std::vector<Index>>{{1, 1}, {1, 2}, {2, 2}, {1, 1, 1, 1}}) {
    Index d = 0;
    for (Index m : dims) d += m;
    const auto p = random_projective(d, dims, 3);
    const auto rho = DensityMatrix::maximally_mixed(d);
    CHECK(c_l1_block(rho, p).value < 1e-10);
    CHECK(c_rel_block(rho, p).value < 1e-10);
    CHECK(c_tsallis_block(rho, p, 0.5).value < 1e-10);
    CHECK(c_trace_block(rho, p).value < 1e-6);
    CHECK(c_weight_block(rho, p).value < 1e-6);
    CHECK(c_renyi_block(rho, p, tight(0.7)).value < 1e-6);
  }
}

TEST_CASE("rank-1 blocks recover the standard l1 coherence") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = random_density(4, 1 + trial % 4, rng);
    double expected = 0.0;
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j)
        if (i != j) expected += std::abs(rho.mat()(i, j));
    CHECK(c_l1_block(rho, ProjectiveMeasurement::computational(4)).value ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("qubit measures match closed forms and grid oracles") {
  const auto basis = ProjectiveMeasurement::computational(2);
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = random_density(2, 2, rng);
    const oracle::Qubit q{rho.mat()(0, 0).real(), rho.mat()(1, 1).real(), rho.mat()(0, 1)};
    CHECK(c_rel_block(rho, basis).value == doctest::Approx(oracle::rel(q)).epsilon(1e-10));
    CHECK(c_tsallis_block(rho, basis, 1.5).value == doctest::Approx(oracle::tsallis(q, 1.5)).epsilon(1e-10));
    CHECK(c_trace_block(rho, basis, tight()).value == doctest::Approx(oracle::trace_closed(q)).epsilon(1e-8));
    CHECK(c_weight_block(rho, basis, tight()).value == doctest::Approx(oracle::weight_closed(q)).epsilon(1e-8));
    CHECK(c_renyi_block(rho, basis, tight()).value == doctest::Approx(oracle::renyi_half_closed(q)).epsilon(1e-8));
  }
}

TEST_CASE("coherence weight along the depolarized plus line") {
  const auto basis = ProjectiveMeasurement::computational(2);
  for (double t : {0.0, 0.2, 0.5, 0.7, 1.0}) {
    CMatrix m = (1.0 - t) * 0.5 * CMatrix::Identity(2, 2) + t * plus().mat();
    const auto r = c_weight_block(DensityMatrix::from_matrix(m), basis);
    CHECK(r.value == doctest::Approx(t).epsilon(1e-7));
    REQUIRE(r.certificate);
    CHECK(*r.certificate->weight == doctest::Approx(t).epsilon(1e-7));
  }
}

TEST_CASE("Tsallis optimizer") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_projective(4, {2, 1, 1}, rng);
    const auto rho = random_density(4, 1 + trial % 4, rng);
    const double alpha = trial % 2 ? 0.1 + 0.8 * rng.uniform() : 1.1 + 0.9 * rng.uniform();
    const auto r = c_tsallis_block(rho, p, alpha);
    REQUIRE(r.certificate);
    const CMatrix sigma = *r.certificate->sigma;
    CHECK(off_block_norm(sigma, p) < 1e-12);
    CHECK(std::abs(sigma.trace() - 1.0) < 1e-12);
    const double s = 1.0 + (alpha - 1.0) * r.value;
    const double d_star = tsallis_relative_entropy(rho.mat(), sigma, alpha);
    CHECK(d_star == doctest::Approx((std::pow(s, alpha) - 1.0) / (alpha - 1.0)).epsilon(1e-8));
    for (int k = 0; k < 5; ++k) {
      const CMatrix other = block_dephase(random_density(4, 4, rng).mat(), p);
      CHECK(tsallis_relative_entropy(rho.mat(), other, alpha) >= d_star - 1e-9);
    }
  }
}

TEST_CASE("Tsallis tends to relative entropy coherence") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_projective(3, {1, 2}, rng);
    const auto rho = random_density(3, 3, rng);
    const double rel = c_rel_block(rho, p).value;
    for (double alpha : {1.0 - 1e-4, 1.0 + 1e-4}) {
      CHECK(std::abs(c_tsallis_block(rho, p, alpha).value / std::log(2.0) - rel) <= 1e-3);
    }
  }
}

TEST_CASE("trace norm boundary optimum") {
  const CVector psi = CVector::Ones(3);
  const auto r = c_trace_block(DensityMatrix::pure(psi), ProjectiveMeasurement::computational(3));
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-7));
  REQUIRE(r.certificate);
  CHECK(r.certificate->boundary);
  CHECK_FALSE(r.certificate->sigma.has_value());
}

TEST_CASE("solver measures are bounded by one") {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_projective(5, {1, 1, 3}, rng);
    const auto rho = random_density(5, 1 + trial, rng);
    CHECK(c_trace_block(rho, p).value <= 1.0 + 1e-9);
    CHECK(c_weight_block(rho, p).value <= 1.0 + 1e-9);
    CHECK(c_renyi_block(rho, p).value <= 1.0 + 1e-9);
  }
}

TEST_CASE("argument checks") {
  const auto basis = ProjectiveMeasurement::computational(2);
  CHECK(clamp_nonnegative(-5e-10, "x") == 0.0);
  CHECK_THROWS_AS(clamp_nonnegative(-1e-6, "x"), CoherenceError);
  CHECK_THROWS_AS(c_tsallis_block(plus(), basis, 1.0), CoherenceError);
  CHECK_THROWS_AS(c_tsallis_block(plus(), basis, 2.5), CoherenceError);
  MeasureParams bad;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(c_renyi_block(plus(), basis, bad), CoherenceError);
  try {
    c_l1_block(DensityMatrix::maximally_mixed(3), basis);
    FAIL("expected DimMismatch");
  } catch (const CoherenceError& e) {
    CHECK(e.kind() == ErrorKind::DimMismatch);
  }
}
