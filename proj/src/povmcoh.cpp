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

#include "coherence/povmcoh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coherence {

namespace {

void require_match(const DensityMatrix& rho, const Povm& e) {
  if (rho.dim() != e.dim()) {
    throw CoherenceError(ErrorKind::DimMismatch, "state dimension does not match the POVM");
  }
}

}  // namespace

const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::L1: return "l1";
    case MeasureKind::Tsallis: return "tsallis";
    case MeasureKind::Rel: return "rel";
    case MeasureKind::TraceNorm: return "trace";
    case MeasureKind::Weight: return "weight";
    case MeasureKind::Renyi: return "renyi";
  }
  return "unknown";
}

const char* to_string(Route route) {
  switch (route) {
    case Route::Direct: return "direct";
    case Route::Embedded: return "embedded";
    case Route::Both: return "both";
  }
  return "unknown";
}

bool has_closed_form(MeasureKind kind) {
  return kind == MeasureKind::L1 || kind == MeasureKind::Tsallis || kind == MeasureKind::Rel;
}

MeasureSpec parse_measure(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::optional<double> alpha;
  if (colon != std::string::npos) {
    const std::string arg = text.substr(colon + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) {
      throw CoherenceError(ErrorKind::InvalidArgument, "bad order in measure '" + text + "'");
    }
    alpha = value;
  }
  MeasureSpec spec{MeasureKind::L1, alpha};
  if (name == "l1") {
    spec.kind = MeasureKind::L1;
  } else if (name == "tsallis") {
    spec.kind = MeasureKind::Tsallis;
  } else if (name == "rel") {
    spec.kind = MeasureKind::Rel;
  } else if (name == "trace") {
    spec.kind = MeasureKind::TraceNorm;
  } else if (name == "weight") {
    spec.kind = MeasureKind::Weight;
  } else if (name == "renyi") {
    spec.kind = MeasureKind::Renyi;
  } else {
    throw CoherenceError(ErrorKind::InvalidArgument, "unknown measure '" + text + "'");
  }
  const bool needs_alpha = spec.kind == MeasureKind::Tsallis || spec.kind == MeasureKind::Renyi;
  if (needs_alpha != alpha.has_value()) {
    throw CoherenceError(ErrorKind::InvalidArgument,
                         needs_alpha ? "measure '" + text + "' needs an order, e.g. " + name + ":0.5"
                                     : "measure '" + text + "' takes no order");
  }
  if (spec.kind == MeasureKind::Tsallis) check_tsallis_alpha(*alpha);
  if (spec.kind == MeasureKind::Renyi) check_renyi_alpha(*alpha);
  return spec;
}

std::string to_string(const MeasureSpec& spec) {
  std::string out = to_string(spec.kind);
  if (spec.alpha) {
    // Shortest form that reads back to the same double.
    for (int digits = 1; digits <= 17; ++digits) {
      std::ostringstream os;
      os.precision(digits);
      os << *spec.alpha;
      if (std::stod(os.str()) == *spec.alpha || digits == 17) {
        out += ":" + os.str();
        break;
      }
    }
  }
  return out;
}

MeasureParams params_for(const MeasureSpec& spec, const SolverConfig& solver) {
  MeasureParams params;
  if (spec.alpha) params.alpha = *spec.alpha;
  params.solver = solver;
  return params;
}

MeasureResult c_l1_povm(const DensityMatrix& rho, const Povm& e) {
  require_match(rho, e);
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (i != j) total += trace_norm(e.kraus()[i] * rho.mat() * e.kraus()[j].adjoint());
    }
  }
  return {clamp_nonnegative(total, "POVM l1 coherence"), std::nullopt, {}};
}

MeasureResult c_tsallis_povm(const DensityMatrix& rho, const Povm& e, double alpha) {
  check_tsallis_alpha(alpha);
  require_match(rho, e);
  const CMatrix rho_alpha = psd_power(rho.mat(), alpha);
  const double scale = eigvalsh(rho_alpha)(0);
  double total = 0.0;
  for (const auto& a : e.kraus()) {
    total += psd_power(hermitian_part(a * rho_alpha * a.adjoint()), 1.0 / alpha, kEigFloor, scale).trace().real();
  }
  return {clamp_nonnegative((total - 1.0) / (alpha - 1.0), "POVM Tsallis coherence"), std::nullopt, {}};
}

MeasureResult c_rel_povm(const DensityMatrix& rho, const Povm& e) {
  require_match(rho, e);
  double outcomes = 0.0;
  for (const auto& a : e.kraus()) outcomes += trace_xlog2x(hermitian_part(a * rho.mat() * a.adjoint()));
  return {clamp_nonnegative(trace_xlog2x(rho.mat()) - outcomes, "POVM relative entropy coherence"),
          std::nullopt, {}};
}

MeasureResult c_trace_povm(const DensityMatrix& rho, const Povm& e, const MeasureParams& params) {
  return embedded_measure(rho, e, MeasureKind::TraceNorm, params);
}

MeasureResult c_weight_povm(const DensityMatrix& rho, const Povm& e, const MeasureParams& params) {
  return embedded_measure(rho, e, MeasureKind::Weight, params);
}

MeasureResult c_renyi_povm(const DensityMatrix& rho, const Povm& e, const MeasureParams& params) {
  return embedded_measure(rho, e, MeasureKind::Renyi, params);
}

MeasureResult embedded_measure(const DensityMatrix& rho, const Povm& e, MeasureKind kind,
                               const MeasureParams& params) {
  require_match(rho, e);
  const ProjectiveMeasurement pbar = register_measurement(e.dim(), e.size());
  if (kind == MeasureKind::Renyi) {
    check_renyi_alpha(params.alpha);
    const CMatrix power = psd_power(rho.mat(), (1.0 - params.alpha) / (2.0 * params.alpha), params.solver.eig_floor);
    const CMatrix k = embed(power, e).mat;
    if (eigvalsh(hermitian_part(k)).minCoeff() < -1e-9) {
      throw CoherenceError(ErrorKind::NotPsd, "embedded Renyi operand is not PSD");
    }
    return renyi_from_operand(hermitian_part(k), pbar, params, embed(rho.mat(), e).mat);
  }
  return block_measure(embed_state(rho, e), pbar, kind, params);
}

double value_from_objective(MeasureKind kind, double objective, double alpha) {
  switch (kind) {
    case MeasureKind::Weight: return std::clamp(1.0 - objective, 0.0, 1.0);
    case MeasureKind::Renyi: return std::clamp(1.0 - std::pow(std::max(objective, 0.0), 1.0 / (1.0 - alpha)), 0.0, 1.0);
    default: return std::max(objective, 0.0);
  }
}

MeasureResult block_measure(const DensityMatrix& rho, const ProjectiveMeasurement& p, MeasureKind kind,
                            const MeasureParams& params) {
  switch (kind) {
    case MeasureKind::L1: return c_l1_block(rho, p);
    case MeasureKind::Tsallis: return c_tsallis_block(rho, p, params.alpha);
    case MeasureKind::Rel: return c_rel_block(rho, p);
    case MeasureKind::TraceNorm: return c_trace_block(rho, p, params);
    case MeasureKind::Weight: return c_weight_block(rho, p, params);
    case MeasureKind::Renyi: return c_renyi_block(rho, p, params);
  }
  throw CoherenceError(ErrorKind::InvalidArgument, "unknown measure");
}

PovmEvaluation evaluate(const PovmMeasureRequest& request) {
  const auto& rho = request.rho;
  const auto& e = request.povm;
  PovmEvaluation out;
  const bool closed = has_closed_form(request.measure);
  const bool want_direct = closed && request.route != Route::Embedded;
  const bool want_embedded = !closed || request.route != Route::Direct;
  if (want_direct) {
    switch (request.measure) {
      case MeasureKind::L1: out.direct = c_l1_povm(rho, e); break;
      case MeasureKind::Tsallis: out.direct = c_tsallis_povm(rho, e, request.params.alpha); break;
      case MeasureKind::Rel: out.direct = c_rel_povm(rho, e); break;
      default: break;
    }
  }
  if (want_embedded) out.embedded = embedded_measure(rho, e, request.measure, request.params);
  if (out.direct && out.embedded) out.difference = out.direct->value - out.embedded->value;
  return out;
}

}  // namespace coherence
