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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "coherence/io.hpp"
#include "coherence/povmcoh.hpp"

using namespace coherence;

namespace {

struct Output {
  int code;
  std::string out;
  std::string err;
};

Output run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("coherence_cli_" + name)).string();
}

std::string write(const std::string& name, const std::string& text) {
  const std::string path = temp(name);
  std::ofstream(path) << text;
  return path;
}

const char* kPlus = R"({"dim": 2, "rho": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]})";
const char* kBasis =
    R"({"type": "projective", "projectors": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]], [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]]})";

double result_value(const io::Json& report, std::size_t i) { return report["results"][i]["value"].get<double>(); }

}  // namespace

TEST_CASE("measure on the plus state") {
  const auto state = write("plus.json", kPlus);
  const auto basis = write("basis.json", kBasis);
  const auto r = run({"measure", "--state", state, "--measurement", basis, "--measures", "l1,rel"});
  REQUIRE(r.code == cli::kOk);
  const auto report = io::Json::parse(r.out);
  CHECK(result_value(report, 0) == doctest::Approx(1.0));
  CHECK(result_value(report, 1) == doctest::Approx(1.0));
  CHECK(report["measurement"]["type"] == "projective");
  CHECK(report["results"][0]["route"] == "block");
}

TEST_CASE("CLI values equal library values exactly") {
  const auto rho = random_density(3, 3, 5);
  const Povm e = random_povm(3, 3, 6);
  const auto state = temp("rand_state.json");
  const auto povm = temp("rand_povm.json");
  io::write_json(state, io::state_to_json(rho));
  io::write_json(povm, io::povm_to_json(e));
  const auto r = run({"measure", "--state", state, "--measurement", povm, "--measures", "l1,tsallis:1.5,rel,weight"});
  REQUIRE(r.code == cli::kOk);
  const auto report = io::Json::parse(r.out);
  CHECK(result_value(report, 0) == c_l1_povm(rho, e).value);
  CHECK(result_value(report, 1) == c_tsallis_povm(rho, e, 1.5).value);
  CHECK(result_value(report, 2) == c_rel_povm(rho, e).value);
  CHECK(result_value(report, 3) == c_weight_povm(rho, e).value);
  CHECK(report["results"][3]["route"] == "embedded");
}

TEST_CASE("reports are byte identical across runs") {
  const auto state = write("plus.json", kPlus);
  const auto povm = temp("trine.json");
  io::write_json(povm, io::povm_to_json(Povm::trine()));
  const std::vector<std::string> args{"measure", "--state", state, "--measurement", povm,
                                      "--measures", "l1,trace,weight,renyi:0.5", "--seed", "3"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("trivial POVM gives zero for every measure") {
  const auto state = write("plus.json", kPlus);
  const auto povm = write("trivial.json", R"({"type": "povm", "effects": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]})");
  const auto r = run({"measure", "--state", state, "--measurement", povm, "--measures",
                      "l1,tsallis:2,rel,trace,weight,renyi:0.5"});
  REQUIRE(r.code == cli::kOk);
  const auto report = io::Json::parse(r.out);
  for (std::size_t i = 0; i < 6; ++i) CHECK(result_value(report, i) <= 1e-6);
}

TEST_CASE("trine with the maximally mixed state") {
  const auto state = temp("mixed.json");
  io::write_json(state, io::state_to_json(DensityMatrix::maximally_mixed(2)));
  const auto povm = temp("trine.json");
  io::write_json(povm, io::povm_to_json(Povm::trine()));
  const auto r = run({"measure", "--state", state, "--measurement", povm, "--measures", "l1", "--route", "both"});
  REQUIRE(r.code == cli::kOk);
  const auto report = io::Json::parse(r.out);
  CHECK(result_value(report, 0) == doctest::Approx(1.0));
  CHECK(std::abs(report["results"][0]["difference"].get<double>()) < 1e-12);
}

TEST_CASE("table format") {
  const auto state = write("plus.json", kPlus);
  const auto basis = write("basis.json", kBasis);
  const auto r = run({"measure", "--state", state, "--measurement", basis, "--measures", "l1,tsallis:2", "--format",
                      "table"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("measure") == 0);
  CHECK(r.out.find("tsallis:2") != std::string::npos);
  CHECK(r.out.find("0.41421356237309") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto state = write("plus.json", kPlus);
  const auto basis = write("basis.json", kBasis);
  const auto broken = write("broken.json", "{not json");
  const auto not_psd = write("notpsd.json", R"({"dim": 2, "rho": [[1.5, 0], [0, -0.5]]})");
  const auto incomplete = write("incomplete.json", R"({"type": "povm", "effects": [[[0.5, 0], [0, 0.5]]]})");
  const auto three = temp("three.json");
  io::write_json(three, io::state_to_json(DensityMatrix::maximally_mixed(3)));

  CHECK(run({"measure", "--state", broken, "--measurement", basis, "--measures", "l1"}).code == cli::kMalformedInput);
  CHECK(run({"measure", "--state", state, "--measurement", basis, "--measures", "nope"}).code ==
        cli::kMalformedInput);
  CHECK(run({"measure", "--state", three, "--measurement", basis, "--measures", "l1"}).code ==
        cli::kMalformedInput);
  CHECK(run({"measure", "--state", not_psd, "--measurement", basis, "--measures", "l1"}).code ==
        cli::kInvalidInput);
  CHECK(run({"measure", "--state", state, "--measurement", incomplete, "--measures", "l1"}).code ==
        cli::kInvalidInput);
  CHECK(run({"measure", "--state", state}).code == cli::kMalformedInput);
  CHECK(run({"verify", "--trials", "0"}).code == cli::kMalformedInput);
  CHECK(run({"bogus"}).code == cli::kMalformedInput);
  CHECK(run({"random", "--kind", "projective", "--dim", "4", "--blocks", "2,1"}).code == cli::kMalformedInput);
  CHECK(run({"random", "--kind", "state", "--dim", "2", "--rank", "3"}).code == cli::kMalformedInput);
  CHECK(run({"random", "--kind", "povm", "--dim", "2", "--rank", "1"}).code == cli::kMalformedInput);
}

TEST_CASE("solver failure reports the flagged best iterate") {
  const auto state = temp("rand6.json");
  io::write_json(state, io::state_to_json(random_density(4, 4, 3)));
  const auto basis = temp("blocks.json");
  io::write_json(basis, io::projective_to_json(random_projective(4, {2, 2}, 4)));
  // A gap tolerance no iterate can certify within the report bound.
  const auto r = run({"measure", "--state", state, "--measurement", basis, "--measures", "renyi:0.6,l1", "--tol",
                      "1e-30"});
  CHECK(r.code == cli::kSolverFailure);
  const auto report = io::Json::parse(r.out);
  CHECK(report["results"][1]["converged"] == true);
  CHECK(report["results"][0]["flagged"] == true);
  CHECK(report["results"][0]["converged"] == false);
  CHECK(report["results"][0]["value"].get<double>() > 0.0);
}

TEST_CASE("random instances round trip bit-identically") {
  const auto path = temp("random_povm.json");
  REQUIRE(run({"random", "--kind", "povm", "--dim", "2", "--outcomes", "3", "--seed", "1", "--out", path}).code ==
          cli::kOk);
  const io::Json first = io::read_json(path);
  const Povm e = std::get<Povm>(io::measurement_from_json(first));
  CHECK(e.size() == 3);
  CHECK(io::dump(io::povm_to_json(e)) == io::dump(first));

  const auto proj = temp("random_proj.json");
  REQUIRE(run({"random", "--kind", "projective", "--dim", "4", "--blocks", "2,2", "--seed", "1", "--out", proj})
              .code == cli::kOk);
  const auto p = std::get<ProjectiveMeasurement>(io::measurement_from_json(io::read_json(proj)));
  CHECK(p.block_dims() == std::vector<Index>{2, 2});

  const auto again = temp("random_povm_again.json");
  run({"random", "--kind", "povm", "--dim", "2", "--outcomes", "3", "--seed", "1", "--out", again});
  CHECK(io::read_json(again) == first);
}

TEST_CASE("seed from the environment") {
  const auto a = temp("env_a.json");
  const auto b = temp("env_b.json");
  setenv("COHERENCE_SEED", "41", 1);
  run({"random", "--kind", "state", "--dim", "3", "--out", a});
  unsetenv("COHERENCE_SEED");
  run({"random", "--kind", "state", "--dim", "3", "--seed", "41", "--out", b});
  CHECK(io::read_json(a) == io::read_json(b));
}

TEST_CASE("naimark subcommand") {
  const auto povm = temp("trine_n.json");
  io::write_json(povm, io::povm_to_json(Povm::trine()));
  const auto out = temp("trine_ext.json");
  const auto r = run({"naimark", "--povm", povm, "--out", out, "--verify"});
  CHECK(r.code == cli::kOk);
  const auto report = io::Json::parse(r.out);
  CHECK(report["ok"] == true);
  CHECK(report["unitarity"]["residual"].get<double>() <= 1e-9);
  const auto ext = io::read_json(out);
  CHECK(ext["V"].size() == 6);

  const auto single = write("single.json", R"({"type": "povm", "effects": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]})");
  REQUIRE(run({"naimark", "--povm", single, "--out", out}).code == cli::kOk);
  const CMatrix v = io::matrix_from_json(io::read_json(out)["V"]);
  CHECK((v - CMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("verify subcommand") {
  auto r = run({"verify", "--suite", "matcore", "--trials", "20", "--seed", "7"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("trace product upper bound") != std::string::npos);
  r = run({"verify", "--suite", "naimark", "--trials", "5", "--dim-max", "3", "--format", "json"});
  CHECK(r.code == cli::kOk);
  CHECK(io::Json::parse(r.out)["ok"] == true);
}
