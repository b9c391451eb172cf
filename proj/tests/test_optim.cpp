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

#include "coherence/optim.hpp"
#include "oracles.hpp"

using namespace coherence;

namespace {

CMatrix qubit(double a, double b, Complex c) {
  CMatrix m(2, 2);
  m << a, c, std::conj(c), b;
  return m;
}

oracle::Qubit as_oracle(const CMatrix& m) { return {m(0, 0).real(), m(1, 1).real(), m(0, 1)}; }

}  // namespace

TEST_CASE("weight SDP on the depolarized plus line") {
  const auto basis = ProjectiveMeasurement::computational(2);
  for (double t : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    const SolverOutcome out = weight_sdp(qubit(0.5, 0.5, 0.5 * t), basis);
    CHECK(out.converged);
    CHECK(1.0 - out.objective == doctest::Approx(t).epsilon(1e-7));
    CHECK(out.objective <= 1.0 + 1e-9);
  }
}

TEST_CASE("solvers against brute-force qubit oracles") {
  const auto basis = ProjectiveMeasurement::computational(2);
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix rho = random_density(2, 1 + trial % 2, rng).mat();
    const oracle::Qubit q = as_oracle(rho);
    CHECK(1.0 - weight_sdp(rho, basis).objective == doctest::Approx(oracle::weight_grid(q)).epsilon(1e-6));
    const SolverOutcome tr = trace_norm_min(rho, basis);
    CHECK(tr.objective == doctest::Approx(oracle::trace_grid(q)).epsilon(1e-6));
    CHECK(tr.objective <= 1.0 + 1e-9);
    for (double alpha : {0.5, 0.75}) {
      const CMatrix k = psd_power(rho, (1.0 - alpha) / (2.0 * alpha));
      const SolverOutcome r = renyi_maximize(k, basis, alpha);
      const double value = 1.0 - std::pow(r.objective, 1.0 / (1.0 - alpha));
      CHECK(value == doctest::Approx(oracle::renyi_grid(q, alpha)).epsilon(1e-6));
    }
  }
}

TEST_CASE("optimizers are block diagonal") {
  Rng rng(5);
  const ProjectiveMeasurement p = random_projective(5, {2, 1, 2}, rng);
  const DensityMatrix rho = random_density(5, 3, rng);
  CHECK(off_block_norm(weight_sdp(rho.mat(), p).optimizer, p) < 1e-12);
  CHECK(off_block_norm(trace_norm_min(rho.mat(), p).optimizer, p) < 1e-12);
  const CMatrix k = psd_power(rho.mat(), 0.25);
  CHECK(off_block_norm(renyi_maximize(k, p, 2.0 / 3.0).optimizer, p) < 1e-12);
}

TEST_CASE("Renyi objective is concave on block-diagonal states") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const ProjectiveMeasurement p = random_projective(4, {2, 2}, rng);
    const CMatrix k = psd_power(random_density(4, 4, rng).mat(), 0.3);
    const CMatrix s1 = block_dephase(random_density(4, 4, rng).mat(), p);
    const CMatrix s2 = block_dephase(random_density(4, 2, rng).mat(), p);
    const double t = rng.uniform();
    const double alpha = 0.5 + 0.49 * rng.uniform();
    const double mixed = renyi_objective(k, t * s1 + (1.0 - t) * s2, alpha);
    CHECK(mixed >= t * renyi_objective(k, s1, alpha) + (1.0 - t) * renyi_objective(k, s2, alpha) - 1e-9);
  }
}

TEST_CASE("Frank-Wolfe certificate") {
  Rng rng(7);
  int certified = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    const ProjectiveMeasurement p = random_projective(6, {2, 2, 1, 1}, rng);
    const CMatrix k = psd_power(random_density(6, 1 + trial % 6, rng).mat(), 0.2);
    const SolverOutcome out = renyi_maximize(k, p, 0.6);
    if (out.converged) {
      ++certified;
      CHECK(out.residuals.stationarity <= 1e-7);
    } else {
      CHECK(out.residuals.stationarity > 1e-7);
    }
    REQUIRE(!out.gap_history.empty());
    // Gaps smoothed over windows of 10 iterations never increase.
    const auto& g = out.gap_history;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t start = 0; start + 10 <= g.size(); start += 10) {
      const double window = *std::min_element(g.begin() + static_cast<long>(start), g.begin() + static_cast<long>(start + 10));
      CHECK(window <= previous * (1.0 + 1e-9) + 1e-15);
      previous = std::min(previous, window);
    }
  }
  CHECK(certified >= 19);
}

TEST_CASE("Renyi order outside [1/2, 1) is rejected") {
  const auto basis = ProjectiveMeasurement::computational(2);
  try {
    renyi_maximize(CMatrix::Identity(2, 2), basis, 0.3);
    FAIL("expected BadAlpha");
  } catch (const CoherenceError& e) {
    CHECK(e.kind() == ErrorKind::BadAlpha);
  }
}
