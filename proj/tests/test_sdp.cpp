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

#include "coherence/quantum.hpp"
#include "coherence/sdp.hpp"

using namespace coherence;

TEST_CASE("smallest eigenvalue as an SDP") {
  // max y  s.t.  C - y I >= 0.
  Rng rng(3);
  const CMatrix c = hermitian_part(rng.gaussian(4, 4));
  sdp::Problem prob;
  prob.block_sizes = {4};
  prob.c = {c};
  std::vector<sdp::Entry> identity;
  for (Index i = 0; i < 4; ++i) identity.push_back({0, i, i, 1.0});
  prob.a = {identity};
  prob.b = RVector::Ones(1);
  const sdp::Solution sol = sdp::solve(prob);
  CHECK(sol.status == sdp::Status::Optimal);
  CHECK(sol.y(0) == doctest::Approx(eigvalsh(c).minCoeff()).epsilon(1e-8));
  CHECK(sol.relative_gap <= 1e-8);
}

TEST_CASE("largest sub-state of a density matrix") {
  // max tr Y  s.t.  Y >= 0,  rho - Y >= 0 is attained only at Y = rho.
  const DensityMatrix rho = random_density(3, 2, 19);
  sdp::Problem prob;
  prob.block_sizes = {3, 3};
  prob.c = {CMatrix::Zero(3, 3), rho.mat()};
  const sdp::HermitianCoords coords{3, 0};
  add_hermitian_basis(prob.a, coords, 0, 0, -1.0);
  std::vector<std::vector<sdp::Entry>> second;
  add_hermitian_basis(second, coords, 1, 0, 1.0);
  for (std::size_t k = 0; k < prob.a.size(); ++k) prob.a[k].insert(prob.a[k].end(), second[k].begin(), second[k].end());
  prob.b = RVector::Zero(coords.count());
  for (Index i = 0; i < 3; ++i) prob.b(i) = 1.0;
  const sdp::Solution sol = sdp::solve(prob);
  CHECK(sol.status == sdp::Status::Optimal);
  CHECK(sol.dual_objective == doctest::Approx(1.0).epsilon(1e-8));
  CHECK((sdp::assemble_hermitian(sol.y, coords) - rho.mat()).norm() < 1e-4);
}

TEST_CASE("Hermitian coordinates match the basis matrices") {
  const sdp::HermitianCoords coords{3, 2};
  std::vector<std::vector<sdp::Entry>> vars(2);
  add_hermitian_basis(vars, coords, 0, 0, 1.0);
  REQUIRE(vars.size() == 11);
  for (Index k = 0; k < coords.count(); ++k) {
    CMatrix basis = CMatrix::Zero(3, 3);
    for (const auto& e : vars[static_cast<std::size_t>(coords.first_var + k)]) basis(e.row, e.col) += e.value;
    RVector y = RVector::Zero(11);
    y(coords.first_var + k) = 1.0;
    CHECK((sdp::assemble_hermitian(y, coords) - basis).norm() < 1e-15);
    CHECK(hermiticity_residual(basis) < 1e-15);
  }
}
