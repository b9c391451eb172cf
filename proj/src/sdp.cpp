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

#include "coherence/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coherence::sdp {

namespace {

using Blocks = std::vector<CMatrix>;
using RMatrix = Eigen::MatrixXd;

Blocks zeros_like(const std::vector<Index>& sizes) {
  Blocks out;
  for (Index n : sizes) out.push_back(CMatrix::Zero(n, n));
  return out;
}

Blocks scaled_identity(const std::vector<Index>& sizes, double value) {
  Blocks out;
  for (Index n : sizes) out.push_back(value * CMatrix::Identity(n, n));
  return out;
}

double frob(const Blocks& m) {
  double acc = 0.0;
  for (const auto& b : m) acc += b.squaredNorm();
  return std::sqrt(acc);
}

double re_inner(const Blocks& a, const Blocks& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i].adjoint() * b[i]).trace().real();
  return acc;
}

// sum_k y_k A_k
Blocks adjoint_map(const Problem& pr, const RVector& y) {
  Blocks out = zeros_like(pr.block_sizes);
  for (Index k = 0; k < pr.num_vars(); ++k) {
    if (y(k) == 0.0) continue;
    for (const Entry& e : pr.a[k]) out[e.block](e.row, e.col) += y(k) * e.value;
  }
  return out;
}

// Re tr(A_k Z) for every k; Z need not be Hermitian.
RVector forward_map(const Problem& pr, const Blocks& z) {
  RVector out(pr.num_vars());
  for (Index k = 0; k < pr.num_vars(); ++k) {
    Complex acc = 0.0;
    for (const Entry& e : pr.a[k]) acc += e.value * z[e.block](e.col, e.row);
    out(k) = acc.real();
  }
  return out;
}

Blocks sym(const Blocks& m) {
  Blocks out;
  for (const auto& b : m) out.push_back(0.5 * (b + b.adjoint()));
  return out;
}

Blocks product(const Blocks& a, const Blocks& b) {
  Blocks out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] * b[i]);
  return out;
}

bool inverse_blocks(const Blocks& s, Blocks& inv) {
  inv.clear();
  for (const auto& b : s) {
    Eigen::LLT<CMatrix> llt(b);
    if (llt.info() != Eigen::Success) return false;
    inv.push_back(llt.solve(CMatrix::Identity(b.rows(), b.cols())));
    inv.back() = 0.5 * (inv.back() + inv.back().adjoint());
  }
  return true;
}

// Largest t with X + t dX PSD (capped at a large number).
double max_step(const Blocks& x, const Blocks& dx) {
  double step = 1e30;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Eigen::LLT<CMatrix> llt(x[i]);
    if (llt.info() != Eigen::Success) return 0.0;
    const CMatrix linv_dx = llt.matrixL().solve(dx[i]);
    CMatrix w = llt.matrixL().solve(linv_dx.adjoint()).adjoint();
    w = 0.5 * (w + w.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(w, Eigen::EigenvaluesOnly);
    const double low = es.eigenvalues()(0);
    if (low < 0.0) step = std::min(step, -1.0 / low);
  }
  return step;
}

struct Direction {
  Blocks dx;
  RVector dy;
  Blocks ds;
};

class SchurSystem {
 public:
  bool factor(const Problem& pr, const Blocks& x, const Blocks& s_inv) {
    const Index p = pr.num_vars();
    RMatrix m = RMatrix::Zero(p, p);
    // M_kl = Re tr(A_k X A_l S^{-1}).
    for (Index k = 0; k < p; ++k) {
      for (Index l = k; l < p; ++l) {
        Complex acc = 0.0;
        for (const Entry& e : pr.a[k]) {
          for (const Entry& f : pr.a[l]) {
            if (e.block != f.block) continue;
            acc += e.value * x[e.block](e.col, f.row) * f.value * s_inv[f.block](f.col, e.row);
          }
        }
        m(k, l) = acc.real();
        m(l, k) = acc.real();
      }
    }
    llt_.compute(m);
    use_ldlt_ = llt_.info() != Eigen::Success;
    if (use_ldlt_) {
      ldlt_.compute(m);
      if (ldlt_.info() != Eigen::Success) return false;
    }
    return true;
  }

  RVector solve(const RVector& rhs) const { return use_ldlt_ ? RVector(ldlt_.solve(rhs)) : RVector(llt_.solve(rhs)); }

 private:
  Eigen::LLT<RMatrix> llt_;
  Eigen::LDLT<RMatrix> ldlt_;
  bool use_ldlt_ = false;
};

}  // namespace

Solution solve(const Problem& pr, const Options& options) {
  const std::size_t nblocks = pr.block_sizes.size();
  if (pr.c.size() != nblocks || pr.b.size() != pr.num_vars()) {
    throw CoherenceError(ErrorKind::InvalidArgument, "inconsistent SDP problem data");
  }
  Index total = 0;
  for (Index n : pr.block_sizes) total += n;
  const double dim = static_cast<double>(total);

  // Starting point scaled to the data, following the usual infeasible-start heuristics.
  double max_a = 0.0;
  double xi = std::max(10.0, std::sqrt(dim));
  for (Index k = 0; k < pr.num_vars(); ++k) {
    double norm_a = 0.0;
    for (const Entry& e : pr.a[k]) norm_a += std::norm(e.value);
    norm_a = std::sqrt(norm_a);
    max_a = std::max(max_a, norm_a);
    xi = std::max(xi, std::sqrt(dim) * (1.0 + std::abs(pr.b(k))) / (1.0 + norm_a));
  }
  const double norm_c = frob(pr.c);
  const double norm_b = pr.b.norm();
  const double eta = std::max({10.0, std::sqrt(dim), norm_c, max_a});

  Solution sol;
  Blocks x = scaled_identity(pr.block_sizes, xi);
  Blocks s = scaled_identity(pr.block_sizes, eta);
  RVector y = RVector::Zero(pr.num_vars());
  Blocks s_inv;
  SchurSystem schur;

  auto record = [&](Status status, int iter) {
    const RVector rp = pr.b - forward_map(pr, x);
    Blocks rd = adjoint_map(pr, y);
    for (std::size_t i = 0; i < nblocks; ++i) rd[i] = pr.c[i] - s[i] - rd[i];
    sol.y = y;
    sol.x = x;
    sol.s = s;
    sol.primal_objective = re_inner(pr.c, x);
    sol.dual_objective = pr.b.dot(y);
    sol.primal_infeasibility = rp.norm() / (1.0 + norm_b);
    sol.dual_infeasibility = frob(rd) / (1.0 + norm_c);
    sol.relative_gap = std::abs(sol.primal_objective - sol.dual_objective) /
                       (1.0 + std::abs(sol.primal_objective) + std::abs(sol.dual_objective));
    sol.iterations = iter;
    sol.status = status;
  };

  for (int iter = 0; iter < options.max_iter; ++iter) {
    const RVector rp = pr.b - forward_map(pr, x);
    Blocks rd = adjoint_map(pr, y);
    for (std::size_t i = 0; i < nblocks; ++i) rd[i] = pr.c[i] - s[i] - rd[i];
    const double pobj = re_inner(pr.c, x);
    const double dobj = pr.b.dot(y);
    const double mu = re_inner(x, s) / dim;
    const double pinf = rp.norm() / (1.0 + norm_b);
    const double dinf = frob(rd) / (1.0 + norm_c);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (!std::isfinite(pobj) || !std::isfinite(dobj) || !std::isfinite(mu)) {
      record(Status::NumericalFailure, iter);
      return sol;
    }
    if (pinf < options.feas_tol && dinf < options.feas_tol && gap < options.gap_tol) {
      record(Status::Optimal, iter);
      return sol;
    }
    if (!inverse_blocks(s, s_inv) || !schur.factor(pr, x, s_inv)) {
      record(Status::NumericalFailure, iter);
      return sol;
    }

    const Blocks x_rd_sinv = product(product(x, rd), s_inv);
    const RVector fixed_rhs = rp + forward_map(pr, x_rd_sinv);
    auto direction = [&](double tau, const Blocks* corr) {
      Blocks h(nblocks);
      for (std::size_t i = 0; i < nblocks; ++i) {
        h[i] = tau * s_inv[i] - x[i];
        if (corr != nullptr) h[i] -= (*corr)[i];
      }
      Direction d;
      d.dy = schur.solve(fixed_rhs - forward_map(pr, h));
      d.ds = adjoint_map(pr, d.dy);
      for (std::size_t i = 0; i < nblocks; ++i) d.ds[i] = rd[i] - d.ds[i];
      const Blocks xdss = sym(product(product(x, d.ds), s_inv));
      d.dx.resize(nblocks);
      for (std::size_t i = 0; i < nblocks; ++i) d.dx[i] = h[i] - xdss[i];
      return d;
    };

    // Mehrotra predictor-corrector with the HKM direction.
    const Direction pred = direction(0.0, nullptr);
    const double ap_aff = std::min(1.0, max_step(x, pred.dx));
    const double ad_aff = std::min(1.0, max_step(s, pred.ds));
    double mu_aff = 0.0;
    for (std::size_t i = 0; i < nblocks; ++i) {
      mu_aff += ((x[i] + ap_aff * pred.dx[i]).adjoint() * (s[i] + ad_aff * pred.ds[i])).trace().real();
    }
    mu_aff /= dim;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);
    const Blocks corr = sym(product(product(pred.dx, pred.ds), s_inv));
    const Direction d = direction(sigma * mu, &corr);

    const double gamma = 0.9 + 0.09 * std::min(ap_aff, ad_aff);
    const double ap = std::min(1.0, gamma * max_step(x, d.dx));
    const double ad = std::min(1.0, gamma * max_step(s, d.ds));
    if (!(ap > 0.0) || !(ad > 0.0) || !d.dy.allFinite()) {
      record(Status::NumericalFailure, iter);
      return sol;
    }
    for (std::size_t i = 0; i < nblocks; ++i) {
      x[i] += ap * d.dx[i];
      x[i] = 0.5 * (x[i] + x[i].adjoint());
      s[i] += ad * d.ds[i];
      s[i] = 0.5 * (s[i] + s[i].adjoint());
    }
    y += ad * d.dy;
  }
  record(Status::MaxIterations, options.max_iter);
  return sol;
}

void add_hermitian_basis(std::vector<std::vector<Entry>>& vars, const HermitianCoords& coords, int block,
                         Index row0, double sign) {
  const Index n = coords.size;
  const auto needed = static_cast<std::size_t>(coords.first_var + coords.count());
  if (vars.size() < needed) vars.resize(needed);
  Index k = coords.first_var;
  for (Index a = 0; a < n; ++a) vars[k++].push_back({block, row0 + a, row0 + a, Complex(sign, 0.0)});
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      vars[k].push_back({block, row0 + a, row0 + b, Complex(sign, 0.0)});
      vars[k].push_back({block, row0 + b, row0 + a, Complex(sign, 0.0)});
      ++k;
      vars[k].push_back({block, row0 + a, row0 + b, Complex(0.0, sign)});
      vars[k].push_back({block, row0 + b, row0 + a, Complex(0.0, -sign)});
      ++k;
    }
  }
}

CMatrix assemble_hermitian(const RVector& y, const HermitianCoords& coords) {
  const Index n = coords.size;
  CMatrix h = CMatrix::Zero(n, n);
  Index k = coords.first_var;
  for (Index a = 0; a < n; ++a) h(a, a) = y(k++);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      h(a, b) = Complex(y(k), y(k + 1));
      h(b, a) = std::conj(h(a, b));
      k += 2;
    }
  }
  return h;
}

}  // namespace coherence::sdp
