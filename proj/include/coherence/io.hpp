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

// JSON schema: complex = [re, im], matrix = row-major nested arrays.

#include <string>
#include <variant>

#include <json.hpp>

#include "coherence/naimark.hpp"
#include "coherence/quantum.hpp"

namespace coherence::io {

using Json = nlohmann::ordered_json;

Json to_json(Complex z);
Json to_json(const CMatrix& m);
Complex complex_from_json(const Json& j);
CMatrix matrix_from_json(const Json& j);

Json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const Json& j);

using Measurement = std::variant<ProjectiveMeasurement, Povm>;

Json projective_to_json(const ProjectiveMeasurement& p);
/// Writes effects and Kraus operators.
Json povm_to_json(const Povm& e);
Measurement measurement_from_json(const Json& j);

Json extension_to_json(const NaimarkExtension& ext);

/// Reads and parses a file; failures raise MalformedInput.
Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);
std::string dump(const Json& j);

/// FNV-1a over the compact serialization, as 16 hex digits.
std::string digest(const Json& j);

}  // namespace coherence::io
