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

// Convex solvers behind the optimization-based coherence measures.

#include <cstdint>
#include <optional>
#include <vector>

#include "coherence/matcore.hpp"
#include "coherence/quantum.hpp"

namespace coherence {

enum class FwStep { ExactLineSearch, Diminishing };

struct SolverConfig {
  double feas_tol = 1e-9;
  double gap_tol = 1e-7;
  int max_iter = 10000;
  FwStep fw_step = FwStep::ExactLineSearch;
  double eig_floor = kEigFloor;
  std::uint64_t seed = 0;
  /// Certificates above gap_tol but within this bound are returned flagged as
  /// unconverged; anything worse raises SolverFailure.
  double report_tol = 1e-6;
};

struct SolverResiduals {
  /// Smallest eigenvalue violation of each cone constraint (0 when satisfied).
  double feasibility = 0.0;
  /// Duality gap (interior point) or Frank-Wolfe gap.
  double stationarity = 0.0;
  /// Primal and dual equality residuals of the interior point iterate.
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
};

struct SolverOutcome {
  double objective = 0.0;
  /// Y, X or sigma in the measurement's original coordinates.
  CMatrix optimizer;
  bool converged = false;
  SolverResiduals residuals;
  int iterations = 0;
  /// Frank-Wolfe gap per iteration (empty for the interior point solvers).
  std::vector<double> gap_history;
};

class SolverFailure : public CoherenceError {
 public:
  SolverFailure(const std::string& what, SolverOutcome best)
      : CoherenceError(ErrorKind::SolverFailure, what), best_(std::move(best)) {}
  const SolverOutcome& best_iterate() const { return best_; }

 private:
  SolverOutcome best_;
};

/// max tr Y  s.t.  0 <= Y <= rho,  Y block diagonal w.r.t. `blocks`.
SolverOutcome weight_sdp(const CMatrix& rho, const ProjectiveMeasurement& blocks, const SolverConfig& cfg = {});

/// min ||rho - X||_tr over PSD block-diagonal X, via
/// min 2 tr Q + tr rho - tr X  s.t.  Q >= 0, Q >= X - rho, X >= 0.
SolverOutcome trace_norm_min(const CMatrix& rho_like, const ProjectiveMeasurement& blocks,
                             const SolverConfig& cfg = {});

/// g(sigma) = tr[(K sigma K)^alpha].
double renyi_objective(const CMatrix& k, const CMatrix& sigma, double alpha, double floor = kEigFloor);

/// Maximizes g over block-diagonal density matrices. `start` defaults to the
/// maximally mixed state and is mixed with it at weight 1e-3 either way.
SolverOutcome renyi_maximize(const CMatrix& k, const ProjectiveMeasurement& blocks, double alpha,
                             const SolverConfig& cfg = {}, const std::optional<CMatrix>& start = std::nullopt);

}  // namespace coherence
