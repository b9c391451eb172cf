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

#include <cstdio>
#include <filesystem>

#include "coherence/io.hpp"

using namespace coherence;

namespace {

ErrorKind kind_of_parse(const std::string& text) {
  try {
    const auto j = io::Json::parse(text);
    if (j.contains("rho")) io::state_from_json(j);
    else io::measurement_from_json(j);
  } catch (const CoherenceError& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("state round trip is bit exact") {
  const auto rho = random_density(3, 2, 9);
  const auto path = (std::filesystem::temp_directory_path() / "coherence_io_state.json").string();
  io::write_json(path, io::state_to_json(rho));
  const auto back = io::state_from_json(io::read_json(path));
  CHECK((back.mat() - rho.mat()).norm() == 0.0);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(back.mat()(i, j) == rho.mat()(i, j));
  std::remove(path.c_str());
}

TEST_CASE("measurement round trips") {
  const auto p = random_projective(4, {2, 2}, 3);
  const auto back = std::get<ProjectiveMeasurement>(io::measurement_from_json(io::projective_to_json(p)));
  for (std::size_t i = 0; i < p.size(); ++i) CHECK((back.projector(i) - p.projector(i)).norm() == 0.0);

  const Povm e = random_povm(2, 3, 4);
  const auto pb = std::get<Povm>(io::measurement_from_json(io::povm_to_json(e)));
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK((pb.effects()[i] - e.effects()[i]).norm() == 0.0);
    CHECK((pb.kraus()[i] - e.kraus()[i]).norm() == 0.0);
  }
}

TEST_CASE("effects without Kraus use principal roots") {
  io::Json j = io::povm_to_json(Povm::trine());
  j.erase("kraus");
  const auto e = std::get<Povm>(io::measurement_from_json(j));
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK((e.kraus()[i] - psd_power(e.effects()[i], 0.5)).norm() < 1e-12);
  }
}

TEST_CASE("malformed inputs") {
  CHECK(kind_of_parse(R"({"dim": 2})") == ErrorKind::MalformedInput);
  CHECK(kind_of_parse(R"({"dim": 2, "rho": [[1, 0], [0]]})") == ErrorKind::MalformedInput);
  CHECK(kind_of_parse(R"({"dim": 3, "rho": [[1, 0], [0, 0]]})") == ErrorKind::MalformedInput);
  CHECK(kind_of_parse(R"({"dim": 2, "rho": [[[1, 0, 0], 0], [0, 0]]})") == ErrorKind::MalformedInput);
  CHECK(kind_of_parse(R"({"type": "other"})") == ErrorKind::MalformedInput);
  CHECK(kind_of_parse(R"({"type": "povm", "effects": []})") == ErrorKind::MalformedInput);
  CHECK_THROWS_AS(io::read_json("/nonexistent/file.json"), CoherenceError);
}

TEST_CASE("invalid but well-formed inputs") {
  CHECK(kind_of_parse(R"({"dim": 2, "rho": [[1, 0], [0, 1]]})") == ErrorKind::InvariantViolation);
  CHECK(kind_of_parse(R"({"type": "povm", "effects": [[[0.5, 0], [0, 0.5]]]})") == ErrorKind::InvariantViolation);
}

TEST_CASE("Naimark export") {
  const NaimarkExtension ext = build_extension(Povm::trine());
  const io::Json j = io::extension_to_json(ext);
  CHECK(j["V"].size() == 6);
  CHECK(j["A"].size() == 3);
  CHECK(j["A"][0].size() == 3);
  CHECK(j["dilated_projectors"].size() == 3);
  CHECK((io::matrix_from_json(j["V"]) - ext.v).norm() == 0.0);
}

TEST_CASE("digests are stable") {
  const io::Json j = io::state_to_json(DensityMatrix::maximally_mixed(2));
  CHECK(io::digest(j) == io::digest(io::Json::parse(j.dump())));
  CHECK(io::digest(j).size() == 16);
}
