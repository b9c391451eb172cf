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

#include "coherence/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "coherence/sdp.hpp"

namespace coherence {

namespace {

void require_blocks(const CMatrix& m, const ProjectiveMeasurement& blocks, const char* what) {
  if (m.rows() != m.cols() || m.rows() != blocks.dim()) {
    throw CoherenceError(ErrorKind::DimMismatch, std::string(what) + ": operand does not match measurement");
  }
  if (hermiticity_residual(m) > kHermitianTol * std::max(1.0, m.norm())) {
    throw CoherenceError(ErrorKind::NotHermitian, std::string(what) + ": operand is not Hermitian");
  }
}

sdp::Options interior_point_options(const SolverConfig& cfg) {
  sdp::Options opts;
  opts.gap_tol = std::min(1e-10, cfg.gap_tol);
  opts.feas_tol = std::min(1e-10, cfg.feas_tol);
  return opts;
}

double min_eigenvalue(const CMatrix& h) {
  const RVector lambda = eigvalsh(hermitian_part(h));
  return lambda(lambda.size() - 1);
}

CMatrix clip_psd(const CMatrix& h) {
  const EigenSystem es = eigh(hermitian_part(h));
  CMatrix scaled = es.vectors;
  for (Index j = 0; j < es.values.size(); ++j) scaled.col(j) *= std::max(es.values(j), 0.0);
  return hermitian_part(scaled * es.vectors.adjoint());
}

// Accept, flag or reject an interior point result.
void judge_interior_point(SolverOutcome& out, const sdp::Solution& sol, const SolverConfig& cfg,
                          const char* what) {
  out.iterations = sol.iterations;
  out.residuals.stationarity = sol.relative_gap;
  out.residuals.primal_infeasibility = sol.primal_infeasibility;
  out.residuals.dual_infeasibility = sol.dual_infeasibility;
  const double worst_infeasibility = std::max({sol.primal_infeasibility, sol.dual_infeasibility,
                                               out.residuals.feasibility});
  out.converged = sol.relative_gap <= cfg.gap_tol && worst_infeasibility <= 10.0 * cfg.feas_tol;
  if (out.converged) return;
  if (sol.relative_gap <= cfg.report_tol && worst_infeasibility <= cfg.report_tol) return;
  throw SolverFailure(std::string(what) + ": interior point method stopped with gap " +
                          std::to_string(sol.relative_gap) + " and infeasibility " +
                          std::to_string(worst_infeasibility),
                      out);
}

}  // namespace

SolverOutcome weight_sdp(const CMatrix& rho, const ProjectiveMeasurement& blocks, const SolverConfig& cfg) {
  require_blocks(rho, blocks, "weight_sdp");
  const CMatrix coords = hermitian_part(blocks.to_block_coords(rho));
  const std::size_t n = blocks.size();
  const Index dim = blocks.dim();

  std::vector<sdp::HermitianCoords> vars;
  Index num_vars = 0;
  for (Index m : blocks.block_dims()) {
    vars.push_back({m, num_vars});
    num_vars += m * m;
  }

  // Cones: Y_i >= 0 for each block, then rho - Y >= 0.
  sdp::Problem pr;
  pr.a.resize(static_cast<std::size_t>(num_vars));
  pr.b = RVector::Zero(num_vars);
  for (std::size_t i = 0; i < n; ++i) {
    pr.block_sizes.push_back(blocks.block_dims()[i]);
    pr.c.push_back(CMatrix::Zero(blocks.block_dims()[i], blocks.block_dims()[i]));
    sdp::add_hermitian_basis(pr.a, vars[i], static_cast<int>(i), 0, -1.0);
    sdp::add_hermitian_basis(pr.a, vars[i], static_cast<int>(n), blocks.offsets()[i], 1.0);
    for (Index a = 0; a < vars[i].size; ++a) pr.b(vars[i].first_var + a) = 1.0;
  }
  pr.block_sizes.push_back(dim);
  pr.c.push_back(coords);

  const sdp::Solution sol = sdp::solve(pr, interior_point_options(cfg));

  CMatrix y = CMatrix::Zero(dim, dim);
  double feasibility = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const CMatrix yi = sdp::assemble_hermitian(sol.y, vars[i]);
    feasibility = std::max(feasibility, -min_eigenvalue(yi));
    y.block(blocks.offsets()[i], blocks.offsets()[i], vars[i].size, vars[i].size) = yi;
  }
  feasibility = std::max(feasibility, -min_eigenvalue(coords - y));

  SolverOutcome out;
  out.objective = y.trace().real();
  out.optimizer = blocks.from_block_coords(y);
  out.residuals.feasibility = std::max(feasibility, 0.0);
  judge_interior_point(out, sol, cfg, "weight_sdp");
  return out;
}

SolverOutcome trace_norm_min(const CMatrix& rho_like, const ProjectiveMeasurement& blocks,
                             const SolverConfig& cfg) {
  require_blocks(rho_like, blocks, "trace_norm_min");
  const CMatrix coords = hermitian_part(blocks.to_block_coords(rho_like));
  const std::size_t n = blocks.size();
  const Index dim = blocks.dim();

  const sdp::HermitianCoords q_vars{dim, 0};
  Index num_vars = q_vars.count();
  std::vector<sdp::HermitianCoords> x_vars;
  for (Index m : blocks.block_dims()) {
    x_vars.push_back({m, num_vars});
    num_vars += m * m;
  }

  // Cones: Q >= 0, X_i >= 0, rho + Q - X >= 0. Maximize tr X - 2 tr Q.
  sdp::Problem pr;
  pr.a.resize(static_cast<std::size_t>(num_vars));
  pr.b = RVector::Zero(num_vars);
  const int last = static_cast<int>(n + 1);
  pr.block_sizes.push_back(dim);
  pr.c.push_back(CMatrix::Zero(dim, dim));
  sdp::add_hermitian_basis(pr.a, q_vars, 0, 0, -1.0);
  sdp::add_hermitian_basis(pr.a, q_vars, last, 0, -1.0);
  for (Index a = 0; a < dim; ++a) pr.b(a) = -2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Index m = blocks.block_dims()[i];
    pr.block_sizes.push_back(m);
    pr.c.push_back(CMatrix::Zero(m, m));
    sdp::add_hermitian_basis(pr.a, x_vars[i], static_cast<int>(i + 1), 0, -1.0);
    sdp::add_hermitian_basis(pr.a, x_vars[i], last, blocks.offsets()[i], 1.0);
    for (Index a = 0; a < m; ++a) pr.b(x_vars[i].first_var + a) = 1.0;
  }
  pr.block_sizes.push_back(dim);
  pr.c.push_back(coords);

  const sdp::Solution sol = sdp::solve(pr, interior_point_options(cfg));

  // Clip the block-diagonal optimizer into the cone and report the exact
  // trace distance of that feasible point.
  CMatrix x = CMatrix::Zero(dim, dim);
  double clipped = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const CMatrix xi = sdp::assemble_hermitian(sol.y, x_vars[i]);
    clipped = std::max(clipped, -min_eigenvalue(xi));
    x.block(blocks.offsets()[i], blocks.offsets()[i], x_vars[i].size, x_vars[i].size) = clip_psd(xi);
  }

  SolverOutcome out;
  out.objective = trace_norm(coords - x);
  out.optimizer = blocks.from_block_coords(x);
  out.residuals.feasibility = std::max(clipped, 0.0);
  judge_interior_point(out, sol, cfg, "trace_norm_min");
  return out;
}

// --- Renyi maximization ----------------------------------------------------

namespace {

using Blocks = std::vector<CMatrix>;

class RenyiProblem {
 public:
  RenyiProblem(CMatrix k, const ProjectiveMeasurement& blocks, double alpha, double floor)
      : k_(std::move(k)), blocks_(blocks), alpha_(alpha), floor_(floor) {}

  CMatrix assemble(const Blocks& sigma) const {
    CMatrix full = CMatrix::Zero(blocks_.dim(), blocks_.dim());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      const Index o = blocks_.offsets()[i];
      full.block(o, o, sigma[i].rows(), sigma[i].cols()) = sigma[i];
    }
    return full;
  }

  double value(const Blocks& sigma) const { return value_full(assemble(sigma)); }

  double value_full(const CMatrix& sigma) const {
    const RVector lambda = eigvalsh(hermitian_part(k_ * sigma * k_));
    const double cutoff = floor_ * std::max(lambda(0), 0.0);
    double acc = 0.0;
    for (Index j = 0; j < lambda.size(); ++j) {
      if (lambda(j) > cutoff && lambda(j) > 0.0) acc += std::pow(lambda(j), alpha_);
    }
    return acc;
  }

  /// Diagonal blocks of alpha K (K sigma K)^(alpha - 1) K, support convention.
  Blocks gradient(const Blocks& sigma) const {
    const CMatrix inner = psd_power(hermitian_part(k_ * assemble(sigma) * k_), alpha_ - 1.0, floor_);
    const CMatrix full = alpha_ * k_ * inner * k_;
    Blocks out;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      const Index o = blocks_.offsets()[i];
      const Index m = blocks_.block_dims()[i];
      out.push_back(hermitian_part(full.block(o, o, m, m)));
    }
    return out;
  }

 private:
  CMatrix k_;
  const ProjectiveMeasurement& blocks_;
  double alpha_;
  double floor_;
};

double inner(const Blocks& a, const Blocks& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i].adjoint() * b[i]).trace().real();
  return acc;
}

Blocks axpy(const Blocks& x, double t, const Blocks& d) {
  Blocks out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(x[i] + t * d[i]);
  return out;
}

Blocks difference(const Blocks& a, const Blocks& b) { return axpy(a, -1.0, b); }

// Euclidean projection onto {block diagonal, PSD, unit trace}.
Blocks project_to_states(const Blocks& z) {
  std::vector<EigenSystem> systems;
  std::vector<double> all;
  for (const auto& zi : z) {
    systems.push_back(eigh(hermitian_part(zi)));
    for (Index j = 0; j < systems.back().values.size(); ++j) all.push_back(systems.back().values(j));
  }
  std::vector<double> sorted = all;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  Blocks out;
  for (const auto& es : systems) {
    CMatrix scaled = es.vectors;
    for (Index j = 0; j < es.values.size(); ++j) scaled.col(j) *= std::max(es.values(j) - theta, 0.0);
    out.push_back(hermitian_part(scaled * es.vectors.adjoint()));
  }
  return out;
}

struct LineResult {
  double step;
  double value;
};

// Maximizes the concave phi(t) = g(sigma + t d) on [0, 1].
LineResult line_search(const RenyiProblem& problem, const Blocks& sigma, const Blocks& d, double current) {
  auto phi = [&](double t) { return problem.value(axpy(sigma, t, d)); };
  const auto [t, neg] = boost::math::tools::brent_find_minima([&](double s) { return -phi(s); }, 0.0, 1.0,
                                                              std::numeric_limits<double>::digits / 2);
  LineResult best{0.0, current};
  if (-neg > best.value) best = {t, -neg};
  const double end = phi(1.0);
  if (end > best.value) best = {1.0, end};
  return best;
}

struct Oracle {
  Blocks vertex;
  double gap;
};

Oracle linear_oracle(const Blocks& grad, const Blocks& sigma) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_block = 0;
  CVector best_vec;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const EigenSystem es = eigh(grad[i]);
    if (es.values(0) > best) {
      best = es.values(0);
      best_block = i;
      best_vec = es.vectors.col(0);
    }
  }
  Oracle o;
  for (std::size_t i = 0; i < grad.size(); ++i) o.vertex.push_back(CMatrix::Zero(grad[i].rows(), grad[i].cols()));
  o.vertex[best_block] = best_vec * best_vec.adjoint();
  o.gap = best - inner(grad, sigma);
  return o;
}

}  // namespace

double renyi_objective(const CMatrix& k, const CMatrix& sigma, double alpha, double floor) {
  const RVector lambda = eigvalsh(hermitian_part(k * sigma * k));
  const double cutoff = floor * std::max(lambda(0), 0.0);
  double acc = 0.0;
  for (Index j = 0; j < lambda.size(); ++j) {
    if (lambda(j) > cutoff && lambda(j) > 0.0) acc += std::pow(lambda(j), alpha);
  }
  return acc;
}

SolverOutcome renyi_maximize(const CMatrix& k, const ProjectiveMeasurement& blocks, double alpha,
                             const SolverConfig& cfg, const std::optional<CMatrix>& start) {
  if (!(alpha >= 0.5 && alpha < 1.0)) {
    throw CoherenceError(ErrorKind::BadAlpha, "Renyi order must lie in [1/2, 1)");
  }
  require_blocks(k, blocks, "renyi_maximize");
  const Index dim = blocks.dim();
  const RenyiProblem problem(hermitian_part(blocks.to_block_coords(k)), blocks, alpha, cfg.eig_floor);

  // sigma0 = (1 - mu) Delta(start) + mu I / dim.
  constexpr double kMix = 1e-3;
  CMatrix initial = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  if (start) {
    require_blocks(*start, blocks, "renyi_maximize start");
    initial = (1.0 - kMix) * blocks.to_block_coords(*start) + kMix * initial;
  }
  Blocks sigma;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Index o = blocks.offsets()[i];
    const Index m = blocks.block_dims()[i];
    sigma.push_back(hermitian_part(initial.block(o, o, m, m)));
  }
  const double trace = std::accumulate(sigma.begin(), sigma.end(), 0.0,
                                       [](double acc, const CMatrix& b) { return acc + b.trace().real(); });
  for (auto& b : sigma) b /= trace;

  SolverOutcome out;
  double value = problem.value(sigma);
  Blocks grad = problem.gradient(sigma);
  Oracle oracle = linear_oracle(grad, sigma);
  double step_size = 1.0;
  Blocks prev_sigma;
  Blocks prev_grad;
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    out.gap_history.push_back(oracle.gap);
    if (oracle.gap <= cfg.gap_tol) break;
    const Blocks fw_dir = difference(oracle.vertex, sigma);

    Blocks next;
    double next_value = value;
    if (cfg.fw_step == FwStep::Diminishing) {
      const double t = 2.0 / (iter + 2.0);
      next = axpy(sigma, t, fw_dir);
      next_value = problem.value(next);
    } else {
      // Exact line search along the Frank-Wolfe direction and along a
      // projected gradient direction; keep whichever climbs higher.
      const LineResult fw = line_search(problem, sigma, fw_dir, value);
      if (fw.value > next_value) {
        next = axpy(sigma, fw.step, fw_dir);
        next_value = fw.value;
      }
      const Blocks pg_dir = difference(project_to_states(axpy(sigma, step_size, grad)), sigma);
      const LineResult pg = line_search(problem, sigma, pg_dir, value);
      if (pg.value > next_value) {
        next = axpy(sigma, pg.step, pg_dir);
        next_value = pg.value;
      }
      if (next.empty()) break;  // no ascent along either direction
    }
    prev_sigma = std::move(sigma);
    prev_grad = std::move(grad);
    sigma = std::move(next);
    value = next_value;
    grad = problem.gradient(sigma);
    oracle = linear_oracle(grad, sigma);

    // Barzilai-Borwein scale for the next projected gradient step.
    const Blocks ds = difference(sigma, prev_sigma);
    const Blocks dg = difference(grad, prev_grad);
    const double curvature = -inner(ds, dg);
    const double ss = inner(ds, ds);
    step_size = curvature > 0.0 ? std::clamp(ss / curvature, 1e-8, 1e8) : 1e8;
  }

  const CMatrix sigma_full = problem.assemble(sigma);
  out.objective = value;
  out.optimizer = blocks.from_block_coords(sigma_full);
  out.iterations = iter;
  out.residuals.stationarity = oracle.gap;
  out.residuals.feasibility =
      std::max({0.0, -min_eigenvalue(sigma_full), std::abs(sigma_full.trace().real() - 1.0)});
  out.converged = oracle.gap <= cfg.gap_tol;
  if (!out.converged && !(oracle.gap <= cfg.report_tol)) {
    throw SolverFailure("renyi_maximize: Frank-Wolfe gap " + std::to_string(oracle.gap) + " after " +
                            std::to_string(iter) + " iterations",
                        out);
  }
  return out;
}

}  // namespace coherence
