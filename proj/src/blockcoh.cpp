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

#include "coherence/blockcoh.hpp"

#include <cmath>
#include <string>

namespace coherence {

namespace {

void require_match(const DensityMatrix& rho, const ProjectiveMeasurement& p) {
  if (rho.dim() != p.dim()) {
    throw CoherenceError(ErrorKind::DimMismatch, "state dimension " + std::to_string(rho.dim()) +
                                                     " vs measurement dimension " + std::to_string(p.dim()));
  }
}

CMatrix diagonal_block(const CMatrix& coords, const ProjectiveMeasurement& p, std::size_t i) {
  const Index o = p.offsets()[i];
  const Index m = p.block_dims()[i];
  return hermitian_part(coords.block(o, o, m, m));
}

Diagnostics from_outcome(const SolverOutcome& out) {
  return Diagnostics{out.iterations, out.residuals, out.converged};
}

}  // namespace

void check_tsallis_alpha(double alpha) {
  if (!((alpha > 0.0 && alpha < 1.0) || (alpha > 1.0 && alpha <= 2.0))) {
    throw CoherenceError(ErrorKind::BadAlpha, "Tsallis order must lie in (0, 1) or (1, 2]");
  }
}

void check_renyi_alpha(double alpha) {
  if (!(alpha >= 0.5 && alpha < 1.0)) {
    throw CoherenceError(ErrorKind::BadAlpha, "Renyi order must lie in [1/2, 1)");
  }
}

double clamp_nonnegative(double value, const char* measure) {
  if (value >= 0.0) return value;
  if (value >= -1e-9) return 0.0;
  throw CoherenceError(ErrorKind::InvariantViolation,
                       std::string(measure) + " evaluated to " + std::to_string(value));
}

MeasureResult c_l1_block(const DensityMatrix& rho, const ProjectiveMeasurement& p) {
  require_match(rho, p);
  const CMatrix coords = p.to_block_coords(rho.mat());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      total += trace_norm(coords.block(p.offsets()[i], p.offsets()[j], p.block_dims()[i], p.block_dims()[j]));
    }
  }
  return {clamp_nonnegative(2.0 * total, "l1 coherence"), std::nullopt, {}};
}

MeasureResult c_tsallis_block(const DensityMatrix& rho, const ProjectiveMeasurement& p, double alpha) {
  check_tsallis_alpha(alpha);
  require_match(rho, p);
  const CMatrix power = psd_power(rho.mat(), alpha);
  const CMatrix coords = p.to_block_coords(power);
  const double scale = eigvalsh(power)(0);
  CMatrix numerator = CMatrix::Zero(p.dim(), p.dim());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const CMatrix root = psd_power(diagonal_block(coords, p, i), 1.0 / alpha, kEigFloor, scale);
    const Index o = p.offsets()[i];
    numerator.block(o, o, root.rows(), root.cols()) = root;
    total += root.trace().real();
  }
  MeasureResult result;
  result.value = clamp_nonnegative((total - 1.0) / (alpha - 1.0), "Tsallis coherence");
  result.certificate = Certificate{p.from_block_coords(numerator / total), std::nullopt, std::nullopt, false};
  return result;
}

MeasureResult c_rel_block(const DensityMatrix& rho, const ProjectiveMeasurement& p) {
  require_match(rho, p);
  const CMatrix coords = p.to_block_coords(rho.mat());
  double dephased = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) dephased += trace_xlog2x(diagonal_block(coords, p, i));
  const double value = trace_xlog2x(rho.mat()) - dephased;
  return {clamp_nonnegative(value, "relative entropy coherence"), std::nullopt, {}};
}

MeasureResult c_trace_block(const DensityMatrix& rho, const ProjectiveMeasurement& p, const MeasureParams& params) {
  require_match(rho, p);
  const SolverOutcome out = trace_norm_min(rho.mat(), p, params.solver);
  MeasureResult result;
  result.value = clamp_nonnegative(out.objective, "trace norm coherence");
  result.diagnostics = from_outcome(out);
  Certificate cert;
  const double lambda = out.optimizer.trace().real();
  cert.lambda = lambda;
  if (lambda > 1e-10) {
    cert.sigma = out.optimizer / lambda;
  } else {
    cert.boundary = true;
  }
  result.certificate = cert;
  return result;
}

MeasureResult c_weight_block(const DensityMatrix& rho, const ProjectiveMeasurement& p, const MeasureParams& params) {
  require_match(rho, p);
  const SolverOutcome out = weight_sdp(rho.mat(), p, params.solver);
  MeasureResult result;
  result.value = std::min(1.0, clamp_nonnegative(1.0 - out.objective, "coherence weight"));
  result.diagnostics = from_outcome(out);
  Certificate cert;
  cert.weight = result.value;
  const double mass = out.optimizer.trace().real();
  if (mass > 1e-10) cert.sigma = out.optimizer / mass;
  result.certificate = cert;
  return result;
}

MeasureResult renyi_from_operand(const CMatrix& k, const ProjectiveMeasurement& p, const MeasureParams& params,
                                 const std::optional<CMatrix>& start) {
  check_renyi_alpha(params.alpha);
  const SolverOutcome out = renyi_maximize(k, p, params.alpha, params.solver, start);
  MeasureResult result;
  const double fidelity_like = std::pow(std::max(out.objective, 0.0), 1.0 / (1.0 - params.alpha));
  result.value = std::min(1.0, clamp_nonnegative(1.0 - fidelity_like, "Renyi coherence"));
  result.diagnostics = from_outcome(out);
  result.certificate = Certificate{out.optimizer, std::nullopt, std::nullopt, false};
  return result;
}

MeasureResult c_renyi_block(const DensityMatrix& rho, const ProjectiveMeasurement& p, const MeasureParams& params) {
  check_renyi_alpha(params.alpha);
  require_match(rho, p);
  const CMatrix k = psd_power(rho.mat(), (1.0 - params.alpha) / (2.0 * params.alpha), params.solver.eig_floor);
  return renyi_from_operand(k, p, params, rho.mat());
}

double tsallis_relative_entropy(const CMatrix& rho, const CMatrix& sigma, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0) {
    throw CoherenceError(ErrorKind::BadAlpha, "Tsallis relative entropy needs alpha > 0, alpha != 1");
  }
  const double overlap = (psd_power(rho, alpha) * psd_power(sigma, 1.0 - alpha)).trace().real();
  return (overlap - 1.0) / (alpha - 1.0);
}

}  // namespace coherence
