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

#include "coherence/verify.hpp"

using namespace coherence;

namespace {

verify::SuiteConfig small(verify::Suite suite, int trials) {
  verify::SuiteConfig cfg;
  cfg.suite = suite;
  cfg.trials = trials;
  cfg.dim_max = 3;
  cfg.seed = 7;
  cfg.channels = 2;
  return cfg;
}

}  // namespace

TEST_CASE("suites pass on small runs") {
  for (auto [suite, trials] : std::vector<std::pair<verify::Suite, int>>{{verify::Suite::Matcore, 50},
                                                                       {verify::Suite::Naimark, 10},
                                                                       {verify::Suite::Block, 4},
                                                                       {verify::Suite::Povm, 3}}) {
    const auto report = verify::run(small(suite, trials));
    CHECK(report.ok());
    for (const auto& p : report.properties) {
      CHECK(p.checks > 0);
      if (p.fatal) CHECK_MESSAGE(p.ok(), p.name);
    }
  }
}

TEST_CASE("block suite covers every axiom for every measure") {
  const auto report = verify::run(small(verify::Suite::Block, 2));
  for (const auto& spec : verify::default_block_measures()) {
    for (const char* prop : {"B1 nonnegative", "B1 zero on dephased", "B2 monotonicity", "B3 strong monotonicity",
                             "B4 convexity", "B5 block additivity"}) {
      const std::string name = std::string(prop) + " [" + to_string(spec) + "]";
      CHECK_MESSAGE(report.find(name) != nullptr, name);
    }
  }
  const auto* b3 = report.find("B3 strong monotonicity [weight]");
  REQUIRE(b3);
  CHECK_FALSE(b3->fatal);
  CHECK(report.find("B3 strong monotonicity [l1]")->fatal);
}

TEST_CASE("reports are deterministic") {
  const auto a = verify::run(small(verify::Suite::Block, 2)).to_json();
  const auto b = verify::run(small(verify::Suite::Block, 2)).to_json();
  CHECK(a.dump() == b.dump());
  auto other = small(verify::Suite::Block, 2);
  other.seed = 8;
  CHECK(verify::run(other).to_json().dump() != a.dump());
}

TEST_CASE("violations produce replayable counterexamples") {
  auto cfg = small(verify::Suite::Block, 3);
  cfg.measures = {{MeasureKind::L1, std::nullopt}};
  // Purity is not zero on block-incoherent states.
  cfg.custom_block_measures.push_back(
      {"purity", true, true, [](const DensityMatrix& rho, const ProjectiveMeasurement&) {
         return (rho.mat() * rho.mat()).trace().real();
       }});
  const auto report = verify::run(cfg);
  CHECK_FALSE(report.ok());
  const auto* failed = report.find("B1 zero on dephased [purity]");
  REQUIRE(failed);
  CHECK_FALSE(failed->ok());
  REQUIRE(failed->counterexample);
  const auto& cx = *failed->counterexample;
  const auto rho = io::state_from_json(cx["instance"]["rho"]);
  const auto p = std::get<ProjectiveMeasurement>(io::measurement_from_json(cx["instance"]["measurement"]));
  const auto d = block_dephase(rho, p);
  CHECK((d.mat() * d.mat()).trace().real() == doctest::Approx(cx["violation"].get<double>()));
  CHECK(report.find("B1 zero on dephased [l1]")->ok());
}

TEST_CASE("fail fast stops early") {
  auto cfg = small(verify::Suite::Block, 20);
  cfg.measures = {{MeasureKind::L1, std::nullopt}};
  cfg.custom_block_measures.push_back(
      {"negative", true, true, [](const DensityMatrix&, const ProjectiveMeasurement&) { return -1.0; }});
  cfg.fail_fast = true;
  const auto report = verify::run(cfg);
  CHECK_FALSE(report.ok());
  CHECK(report.find("B1 nonnegative [negative]")->checks == 1);
}

TEST_CASE("argument validation") {
  auto cfg = small(verify::Suite::Matcore, 0);
  CHECK_THROWS_AS(verify::run(cfg), CoherenceError);
  CHECK(verify::parse_suite("povm") == verify::Suite::Povm);
  CHECK_THROWS_AS(verify::parse_suite("nope"), CoherenceError);
}
