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

#include <ostream>
#include <string>
#include <vector>

namespace coherence::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kPropertyViolation = 1;
inline constexpr int kMalformedInput = 2;
inline constexpr int kInvalidInput = 3;
inline constexpr int kSolverFailure = 4;
inline constexpr int kCompletionFailure = 5;

/// Runs the CLI on `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coherence::cli
