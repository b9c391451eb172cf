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

#include "coherence/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

namespace coherence::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw CoherenceError(ErrorKind::MalformedInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<CMatrix> matrix_list(const Json& j, const char* key) {
  const Json& list = field(j, key);
  if (!list.is_array() || list.empty()) malformed(std::string("'") + key + "' must be a non-empty array");
  std::vector<CMatrix> out;
  for (const auto& item : list) out.push_back(matrix_from_json(item));
  return out;
}

Json matrix_list_json(const std::vector<CMatrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    malformed("complex entries must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    malformed("matrix must be a non-empty array of rows");
  }
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) malformed("ragged matrix rows");
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  if (!all_finite(m)) malformed("matrix has non-finite entries");
  return m;
}

Json state_to_json(const DensityMatrix& rho) {
  Json j;
  j["dim"] = rho.dim();
  j["rho"] = to_json(rho.mat());
  return j;
}

DensityMatrix state_from_json(const Json& j) {
  const Json& dim = field(j, "dim");
  if (!dim.is_number_integer() || dim.get<long long>() < 1) malformed("'dim' must be a positive integer");
  const CMatrix rho = matrix_from_json(field(j, "rho"));
  if (rho.rows() != rho.cols() || rho.rows() != dim.get<long long>()) malformed("'rho' does not match 'dim'");
  return DensityMatrix::from_matrix(rho);
}

Json projective_to_json(const ProjectiveMeasurement& p) {
  Json j;
  j["type"] = "projective";
  j["projectors"] = matrix_list_json(p.projectors());
  return j;
}

Json povm_to_json(const Povm& e) {
  Json j;
  j["type"] = "povm";
  j["effects"] = matrix_list_json(e.effects());
  j["kraus"] = matrix_list_json(e.kraus());
  return j;
}

Measurement measurement_from_json(const Json& j) {
  const Json& type = field(j, "type");
  if (!type.is_string()) malformed("'type' must be a string");
  const std::string kind = type.get<std::string>();
  if (kind == "projective") return ProjectiveMeasurement::from_projectors(matrix_list(j, "projectors"));
  if (kind != "povm") malformed("unknown measurement type '" + kind + "'");
  auto effects = matrix_list(j, "effects");
  if (j.contains("kraus") && !j.at("kraus").is_null()) {
    auto kraus = matrix_list(j, "kraus");
    if (kraus.size() != effects.size()) malformed("'kraus' and 'effects' differ in length");
    return Povm::from_effects_and_kraus(std::move(effects), std::move(kraus));
  }
  return Povm::from_effects(std::move(effects));
}

Json extension_to_json(const NaimarkExtension& ext) {
  Json j;
  j["dim"] = ext.d;
  j["outcomes"] = ext.n;
  j["V"] = to_json(ext.v);
  Json grid = Json::array();
  for (const auto& row : ext.a_blocks) grid.push_back(matrix_list_json(row));
  j["A"] = std::move(grid);
  j["register_projectors"] = matrix_list_json(ext.pbar.projectors());
  j["dilated_projectors"] = matrix_list_json(ext.dilated.projectors());
  return j;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& ex) {
    malformed("'" + path + "': " + ex.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw CoherenceError(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << dump(j) << '\n';
}

std::string dump(const Json& j) { return j.dump(2); }

std::string digest(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace coherence::io
