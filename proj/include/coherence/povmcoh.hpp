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

// Coherence with respect to a POVM. Closed forms act directly on the Kraus
// operators; every measure can also be evaluated as the block measure of the
// embedded state eps(rho) against the register measurement.

#include <optional>
#include <string>

#include "coherence/blockcoh.hpp"
#include "coherence/naimark.hpp"

namespace coherence {

enum class MeasureKind { L1, Tsallis, Rel, TraceNorm, Weight, Renyi };
enum class Route { Direct, Embedded, Both };

const char* to_string(MeasureKind kind);
const char* to_string(Route route);
bool has_closed_form(MeasureKind kind);
/// Parses "l1", "tsallis:<a>", "rel", "trace", "weight", "renyi:<a>".
struct MeasureSpec {
  MeasureKind kind;
  std::optional<double> alpha;
};
MeasureSpec parse_measure(const std::string& text);
std::string to_string(const MeasureSpec& spec);
MeasureParams params_for(const MeasureSpec& spec, const SolverConfig& solver = {});

struct PovmMeasureRequest {
  DensityMatrix rho;
  Povm povm;
  MeasureKind measure;
  MeasureParams params;
  Route route = Route::Direct;
};

struct PovmEvaluation {
  std::optional<MeasureResult> direct;
  std::optional<MeasureResult> embedded;
  /// direct - embedded when both were computed.
  std::optional<double> difference;

  /// The value the request asked for (direct when available).
  const MeasureResult& primary() const { return direct ? *direct : *embedded; }
};

MeasureResult c_l1_povm(const DensityMatrix& rho, const Povm& e);
MeasureResult c_tsallis_povm(const DensityMatrix& rho, const Povm& e, double alpha);
MeasureResult c_rel_povm(const DensityMatrix& rho, const Povm& e);
MeasureResult c_trace_povm(const DensityMatrix& rho, const Povm& e, const MeasureParams& params = {});
MeasureResult c_weight_povm(const DensityMatrix& rho, const Povm& e, const MeasureParams& params = {});
/// Operand eps(rho^((1-alpha)/(2 alpha))) against the register measurement.
MeasureResult c_renyi_povm(const DensityMatrix& rho, const Povm& e, const MeasureParams& params = {});

/// Block measure of eps(rho) against the register measurement.
MeasureResult embedded_measure(const DensityMatrix& rho, const Povm& e, MeasureKind kind,
                               const MeasureParams& params = {});

/// Measure value implied by a raw solver objective, e.g. a best iterate
/// carried by SolverFailure. Only meaningful for the solver-based measures.
double value_from_objective(MeasureKind kind, double objective, double alpha);

/// Block measure dispatch, used by the CLI and the property suites.
MeasureResult block_measure(const DensityMatrix& rho, const ProjectiveMeasurement& p, MeasureKind kind,
                            const MeasureParams& params = {});

/// Evaluates a request. Direct is only available for the closed forms; the
/// solver-based measures always go through the embedding.
PovmEvaluation evaluate(const PovmMeasureRequest& request);

}  // namespace coherence
