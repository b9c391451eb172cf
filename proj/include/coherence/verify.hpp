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

// Randomized property suites. Trial t of a suite draws from the stream
// derive_seed(seed, t), so any failing trial can be replayed on its own.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coherence/io.hpp"
#include "coherence/povmcoh.hpp"

namespace coherence::verify {

enum class Suite { Block, Povm, Naimark, Matcore, All };

Suite parse_suite(const std::string& name);
const char* to_string(Suite suite);

/// Extra block measure run through the block suite next to the built-in ones.
struct CustomMeasure {
  std::string name;
  /// Closed forms get the tighter tolerances.
  bool closed_form = true;
  /// Whether strong monotonicity failures are fatal.
  bool strong_monotone = true;
  std::function<double(const DensityMatrix&, const ProjectiveMeasurement&)> fn;
};

struct SuiteConfig {
  Suite suite = Suite::All;
  int trials = 20;
  Index dim_max = 4;
  std::uint64_t seed = 0;
  bool fail_fast = false;
  /// Empty selects the default list for the suite.
  std::vector<MeasureSpec> measures;
  std::vector<CustomMeasure> custom_block_measures;
  /// Overrides the dimension draw when non-empty (block suite).
  std::vector<Index> dims;
  /// BI channels per trial for monotonicity.
  int channels = 5;
  SolverConfig solver;
};

struct PropertyStats {
  std::string name;
  bool fatal = true;
  int checks = 0;
  int passes = 0;
  /// Largest (violation - tolerance); negative when every check passed.
  double worst_margin = -1e300;
  std::optional<io::Json> counterexample;

  bool ok() const { return checks == passes; }
};

struct SuiteReport {
  std::vector<PropertyStats> properties;
  int solver_calls = 0;
  int solver_flagged = 0;
  double seconds = 0.0;

  /// True iff every fatal property passed.
  bool ok() const;
  const PropertyStats* find(const std::string& name) const;
  io::Json to_json() const;
  std::string table() const;
};

std::vector<MeasureSpec> default_block_measures();
std::vector<MeasureSpec> default_povm_measures();

SuiteReport run(const SuiteConfig& cfg);

}  // namespace coherence::verify
