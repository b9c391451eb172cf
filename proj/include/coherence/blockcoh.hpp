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

// Block coherence measures with respect to a projective measurement.

#include <optional>
#include <string>

#include "coherence/optim.hpp"
#include "coherence/quantum.hpp"

namespace coherence {

struct MeasureParams {
  double alpha = 0.5;
  SolverConfig solver;
};

struct Certificate {
  /// Optimal block-incoherent state, when the optimum identifies one.
  std::optional<CMatrix> sigma;
  /// Trace-norm scale lambda* = tr X*.
  std::optional<double> lambda;
  /// Coherence weight s*.
  std::optional<double> weight;
  /// Optimum sits on the lambda = 0 boundary of the trace-norm problem.
  bool boundary = false;
};

struct Diagnostics {
  int iterations = 0;
  SolverResiduals residuals;
  bool converged = true;
};

struct MeasureResult {
  double value = 0.0;
  std::optional<Certificate> certificate;
  Diagnostics diagnostics;
};

/// Values in [-1e-9, 0) clamp to 0; anything more negative is an error.
double clamp_nonnegative(double value, const char* measure);

/// sum_{i != j} ||P_i rho P_j||_tr.
MeasureResult c_l1_block(const DensityMatrix& rho, const ProjectiveMeasurement& p);

/// [sum_i tr((P_i rho^alpha P_i)^(1/alpha)) - 1] / (alpha - 1) for alpha in
/// (0, 1) or (1, 2]; the certificate is the minimizing block-incoherent state.
MeasureResult c_tsallis_block(const DensityMatrix& rho, const ProjectiveMeasurement& p, double alpha);

/// S(Delta_P(rho)) - S(rho) in bits.
MeasureResult c_rel_block(const DensityMatrix& rho, const ProjectiveMeasurement& p);

/// min over lambda >= 0 and block-incoherent sigma of ||rho - lambda sigma||_tr.
MeasureResult c_trace_block(const DensityMatrix& rho, const ProjectiveMeasurement& p,
                            const MeasureParams& params = {});

/// 1 - max{tr Y : 0 <= Y <= rho, Y block diagonal}.
MeasureResult c_weight_block(const DensityMatrix& rho, const ProjectiveMeasurement& p,
                             const MeasureParams& params = {});

/// 1 - max_sigma {tr[(K sigma K)^alpha]}^(1/(1-alpha)), K = rho^((1-alpha)/(2 alpha)),
/// alpha in [1/2, 1).
MeasureResult c_renyi_block(const DensityMatrix& rho, const ProjectiveMeasurement& p,
                            const MeasureParams& params = {});

/// Same measure for an already computed K; shared with the POVM pipeline.
MeasureResult renyi_from_operand(const CMatrix& k, const ProjectiveMeasurement& p, const MeasureParams& params,
                                 const std::optional<CMatrix>& start);

/// D_T,alpha(rho || sigma) = [tr(rho^alpha sigma^(1-alpha)) - 1] / (alpha - 1).
/// Negative powers act on the support of sigma.
double tsallis_relative_entropy(const CMatrix& rho, const CMatrix& sigma, double alpha);

void check_tsallis_alpha(double alpha);
void check_renyi_alpha(double alpha);

}  // namespace coherence
