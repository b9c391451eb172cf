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

#include "coherence/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace coherence::verify {

namespace {

constexpr double kNonnegTol = 1e-9;

using InstanceFn = std::function<io::Json()>;

class Recorder {
 public:
  Recorder(SuiteReport& report, bool fail_fast) : report_(report), fail_fast_(fail_fast) {}

  bool check(const std::string& name, bool fatal, double violation, double tol, const InstanceFn& instance) {
    PropertyStats& stats = property(name, fatal);
    ++stats.checks;
    const double margin = std::isnan(violation) ? 1e300 : violation - tol;
    stats.worst_margin = std::max(stats.worst_margin, margin);
    if (margin <= 0.0) {
      ++stats.passes;
      return true;
    }
    if (!stats.counterexample) {
      io::Json cx;
      cx["property"] = name;
      cx["violation"] = violation;
      cx["tolerance"] = tol;
      cx["instance"] = instance();
      stats.counterexample = std::move(cx);
    }
    if (fatal) failed_ = true;
    return false;
  }

  void skip(const std::string& name, bool fatal) { property(name, fatal); }

  bool stop() const { return fail_fast_ && failed_; }

  SuiteReport& report() { return report_; }

 private:
  PropertyStats& property(const std::string& name, bool fatal) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      it = index_.emplace(name, report_.properties.size()).first;
      PropertyStats stats;
      stats.name = name;
      stats.fatal = fatal;
      report_.properties.push_back(std::move(stats));
    }
    return report_.properties[it->second];
  }

  SuiteReport& report_;
  bool fail_fast_;
  bool failed_ = false;
  std::map<std::string, std::size_t> index_;
};

/// Measure evaluation with solver bookkeeping; nullopt when the solver gave up.
class Evaluator {
 public:
  Evaluator(SuiteReport& report, const SolverConfig& solver) : report_(report), solver_(solver) {}

  std::optional<double> block(const DensityMatrix& rho, const ProjectiveMeasurement& p, const MeasureSpec& spec) {
    return guarded(spec, [&](const MeasureParams& params) { return block_measure(rho, p, spec.kind, params); });
  }

  /// Default route: closed forms directly, solver measures through the embedding.
  std::optional<double> povm(const DensityMatrix& rho, const Povm& e, const MeasureSpec& spec) {
    return guarded(spec, [&](const MeasureParams& params) {
      return evaluate({rho, e, spec.kind, params, Route::Direct}).primary();
    });
  }

  std::optional<double> embedded(const DensityMatrix& rho, const Povm& e, const MeasureSpec& spec) {
    return guarded(spec, [&](const MeasureParams& params) { return embedded_measure(rho, e, spec.kind, params); });
  }

 private:
  template <typename F>
  std::optional<double> guarded(const MeasureSpec& spec, F&& f) {
    const bool solver = !has_closed_form(spec.kind);
    if (solver) ++report_.solver_calls;
    try {
      const MeasureResult r = f(params_for(spec, solver_));
      if (solver && !r.diagnostics.converged) ++report_.solver_flagged;
      return r.value;
    } catch (const SolverFailure&) {
      ++report_.solver_flagged;
      return std::nullopt;
    }
  }

  SuiteReport& report_;
  SolverConfig solver_;
};

std::string label(const char* property, const MeasureSpec& spec) {
  return std::string(property) + " [" + to_string(spec) + "]";
}

double closed_or(const MeasureSpec& spec, double closed, double solver) {
  return has_closed_form(spec.kind) ? closed : solver;
}

/// A block measure under test, built-in or injected.
struct Candidate {
  std::string name;
  bool closed = true;
  bool b3_fatal = true;
  std::function<std::optional<double>(const DensityMatrix&)> eval;

  std::string label(const char* property) const { return std::string(property) + " [" + name + "]"; }
  double tol(double closed_tol, double solver_tol) const { return closed ? closed_tol : solver_tol; }
};

std::vector<Candidate> candidates(const SuiteConfig& cfg, const ProjectiveMeasurement& p, Evaluator& ev) {
  std::vector<Candidate> out;
  for (const MeasureSpec& spec : cfg.measures) {
    out.push_back({to_string(spec), has_closed_form(spec.kind),
                   spec.kind == MeasureKind::L1 || spec.kind == MeasureKind::Tsallis,
                   [&ev, &p, spec](const DensityMatrix& rho) { return ev.block(rho, p, spec); }});
  }
  for (const CustomMeasure& m : cfg.custom_block_measures) {
    out.push_back({m.name, m.closed_form, m.strong_monotone,
                   [&p, fn = m.fn](const DensityMatrix& rho) -> std::optional<double> { return fn(rho, p); }});
  }
  return out;
}

/// Random composition of m into 2..m parts (a single part when m == 1).
std::vector<Index> random_blocks(Index m, Rng& rng) {
  if (m == 1) return {1};
  const auto parts = static_cast<Index>(2 + rng.index(static_cast<std::size_t>(m - 1)));
  std::vector<Index> dims(static_cast<std::size_t>(parts), 1);
  for (Index extra = m - parts; extra > 0; --extra) ++dims[rng.index(dims.size())];
  return dims;
}

Index random_rank(Index dim, Rng& rng) { return static_cast<Index>(1 + rng.index(static_cast<std::size_t>(dim))); }

std::vector<double> random_weights(std::size_t k, Rng& rng) {
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& x : w) total += (x = 0.05 + rng.uniform());
  for (auto& x : w) x /= total;
  return w;
}

io::Json channel_json(const KrausChannel& ch) {
  io::Json out = io::Json::array();
  for (const auto& k : ch.kraus_ops()) out.push_back(io::to_json(k));
  return out;
}

io::Json trial_header(const char* suite, int trial, std::uint64_t seed) {
  io::Json j;
  j["suite"] = suite;
  j["trial"] = trial;
  j["seed"] = seed;
  j["stream"] = derive_seed(seed, static_cast<std::uint64_t>(trial));
  return j;
}

std::uint64_t suite_seed(std::uint64_t seed, Suite suite) {
  return derive_seed(seed, 0x5eed0000ULL + static_cast<std::uint64_t>(suite));
}

// --- block ------------------------------------------------------------------

void block_trial(const SuiteConfig& cfg, int trial, Recorder& rec, Evaluator& ev) {
  const std::uint64_t seed = suite_seed(cfg.seed, Suite::Block);
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
  const Index m = cfg.dims.empty()
                      ? static_cast<Index>(2 + rng.index(static_cast<std::size_t>(std::max<Index>(cfg.dim_max, 2) - 1)))
                      : cfg.dims[static_cast<std::size_t>(trial) % cfg.dims.size()];
  const ProjectiveMeasurement p = random_projective(m, random_blocks(m, rng), rng);
  const DensityMatrix rho = random_density(m, random_rank(m, rng), rng);
  const DensityMatrix dephased = block_dephase(rho, p);

  std::vector<KrausChannel> channels;
  for (int c = 0; c < cfg.channels; ++c) channels.push_back(random_bi_channel(p, 1 + rng.index(3), rng));

  std::vector<DensityMatrix> parts;
  for (int k = 0; k < 3; ++k) parts.push_back(random_density(m, random_rank(m, rng), rng));
  const std::vector<double> q = random_weights(3, rng);
  CMatrix mix = CMatrix::Zero(m, m);
  for (int k = 0; k < 3; ++k) mix += q[static_cast<std::size_t>(k)] * parts[static_cast<std::size_t>(k)].mat();
  const DensityMatrix mixture = DensityMatrix::from_computed(mix);

  std::vector<std::size_t> group1, group2;
  for (std::size_t i = 0; i < p.size(); ++i) (i == 0 || (i + 1 < p.size() && rng.uniform() < 0.5) ? group1 : group2).push_back(i);
  const double p1 = 0.1 + 0.8 * rng.uniform();
  const DensityMatrix rho1 = random_density_on_blocks(p, group1, rng);
  const DensityMatrix rho2 = random_density_on_blocks(p, group2, rng);
  const DensityMatrix sum = direct_sum_state(p1, rho1, 1.0 - p1, rho2, p, group1);

  const auto instance = [&](const Candidate& c) {
    return [&, name = c.name]() {
      io::Json j = trial_header("block", trial, cfg.seed);
      j["measure"] = name;
      j["rho"] = io::state_to_json(rho);
      j["measurement"] = io::projective_to_json(p);
      return j;
    };
  };

  for (const Candidate& m : candidates(cfg, p, ev)) {
    if (rec.stop()) return;
    const auto c = m.eval(rho);
    if (!c) {
      rec.skip(m.label("B1 nonnegative"), true);
      continue;
    }
    rec.check(m.label("B1 nonnegative"), true, -*c, kNonnegTol, instance(m));
    if (const auto cd = m.eval(dephased)) {
      rec.check(m.label("B1 zero on dephased"), true, *cd, m.tol(1e-10, 1e-6), instance(m));
    }

    const double mono_tol = m.tol(1e-6, 1e-5);
    for (std::size_t k = 0; k < channels.size(); ++k) {
      const auto out = m.eval(apply_channel(channels[k], rho));
      if (!out) continue;
      rec.check(m.label("B2 monotonicity"), true, *out - *c, mono_tol, [&, k]() {
        io::Json j = instance(m)();
        j["channel"] = channel_json(channels[k]);
        return j;
      });
    }

    if (!channels.empty()) {
      double avg = 0.0;
      bool complete = true;
      for (const auto& branch : branches(channels.front(), rho)) {
        const auto cb = m.eval(branch.state);
        if (!cb) {
          complete = false;
          break;
        }
        avg += branch.probability * *cb;
      }
      if (complete) {
        rec.check(m.label("B3 strong monotonicity"), m.b3_fatal, avg - *c, mono_tol, [&]() {
          io::Json j = instance(m)();
          j["channel"] = channel_json(channels.front());
          return j;
        });
      }
    }

    {
      const auto cm = m.eval(mixture);
      double rhs = 0.0;
      bool complete = cm.has_value();
      for (int k = 0; k < 3 && complete; ++k) {
        const auto ck = m.eval(parts[static_cast<std::size_t>(k)]);
        if (!ck) complete = false;
        else rhs += q[static_cast<std::size_t>(k)] * *ck;
      }
      if (complete) {
        rec.check(m.label("B4 convexity"), true, *cm - rhs, m.tol(1e-8, 1e-5), [&]() {
          io::Json j = instance(m)();
          io::Json states = io::Json::array();
          for (const auto& s : parts) states.push_back(io::state_to_json(s));
          j["mixture_states"] = std::move(states);
          j["mixture_weights"] = q;
          return j;
        });
      }
    }

    {
      const auto cs = m.eval(sum);
      const auto c1 = m.eval(rho1);
      const auto c2 = m.eval(rho2);
      if (cs && c1 && c2) {
        const double gap = std::abs(*cs - p1 * *c1 - (1.0 - p1) * *c2);
        rec.check(m.label("B5 block additivity"), true, gap, m.tol(1e-8, 1e-5), [&]() {
          io::Json j = instance(m)();
          j["p1"] = p1;
          j["rho1"] = io::state_to_json(rho1);
          j["rho2"] = io::state_to_json(rho2);
          j["group1"] = group1;
          return j;
        });
      }
    }
  }
}

// --- povm -------------------------------------------------------------------

double standard_l1(const CMatrix& rho) {
  double total = 0.0;
  for (Index i = 0; i < rho.rows(); ++i)
    for (Index j = 0; j < rho.cols(); ++j)
      if (i != j) total += std::abs(rho(i, j));
  return total;
}

double standard_rel(const CMatrix& rho) {
  return trace_xlog2x(rho) - xlog2x_sum(rho.diagonal().real());
}

double standard_tsallis(const CMatrix& rho, double alpha) {
  const CMatrix power = psd_power(rho, alpha);
  double total = 0.0;
  for (Index i = 0; i < rho.rows(); ++i) total += std::pow(std::max(power(i, i).real(), 0.0), 1.0 / alpha);
  return (total - 1.0) / (alpha - 1.0);
}

std::vector<CMatrix> gauge_kraus(const std::vector<CMatrix>& kraus, Rng& rng) {
  std::vector<CMatrix> out;
  for (const auto& a : kraus) out.push_back(random_unitary(a.rows(), rng) * a);
  return out;
}

void povm_trial(const SuiteConfig& cfg, int trial, Recorder& rec, Evaluator& ev) {
  const std::uint64_t seed = suite_seed(cfg.seed, Suite::Povm);
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
  const Index dmax = std::clamp<Index>(cfg.dim_max, 2, 4);
  const auto d = static_cast<Index>(2 + rng.index(static_cast<std::size_t>(dmax - 1)));
  const std::size_t n = 1 + rng.index(4);
  const Povm e = random_povm(d, n, rng);
  const DensityMatrix rho = random_density(d, random_rank(d, rng), rng);
  const Povm gauged = Povm::from_effects_and_kraus(e.effects(), gauge_kraus(e.kraus(), rng));

  const ProjectiveMeasurement q = random_projective(d, random_blocks(d, rng), rng);
  const Povm projective = Povm::from_effects_and_kraus(q.projectors(), gauge_kraus(q.projectors(), rng));
  const DensityMatrix incoherent = block_dephase(random_density(d, random_rank(d, rng), rng), q);

  std::vector<DensityMatrix> parts;
  for (int k = 0; k < 3; ++k) parts.push_back(random_density(d, random_rank(d, rng), rng));
  const std::vector<double> w = random_weights(3, rng);
  CMatrix mix = CMatrix::Zero(d, d);
  for (int k = 0; k < 3; ++k) mix += w[static_cast<std::size_t>(k)] * parts[static_cast<std::size_t>(k)].mat();
  const DensityMatrix mixture = DensityMatrix::from_computed(mix);

  const NaimarkExtension ext1 = build_extension(e);
  const NaimarkExtension ext2 = build_extension(e, rng.next());
  const auto dilate = [&](const NaimarkExtension& ext) {
    return DensityMatrix::from_computed(ext.v * attach_register(rho.mat(), n) * ext.v.adjoint());
  };
  const DensityMatrix eps1 = dilate(ext1);
  const DensityMatrix eps2 = dilate(ext2);

  const Povm computational = Povm::computational(d);
  const ProjectiveMeasurement basis = ProjectiveMeasurement::computational(d);

  const auto instance = [&](const MeasureSpec& spec) {
    return [&, spec]() {
      io::Json j = trial_header("povm", trial, cfg.seed);
      j["measure"] = to_string(spec);
      j["rho"] = io::state_to_json(rho);
      j["measurement"] = io::povm_to_json(e);
      return j;
    };
  };

  rec.check("P1 incoherent state is POVM incoherent", true,
            povm_incoherence_residuals(incoherent, projective).kraus_form, kIncoherenceTol, [&]() {
              io::Json j = trial_header("povm", trial, cfg.seed);
              j["rho"] = io::state_to_json(incoherent);
              j["measurement"] = io::povm_to_json(projective);
              return j;
            });

  for (const MeasureSpec& spec : cfg.measures) {
    if (rec.stop()) return;
    const bool closed = has_closed_form(spec.kind);
    const auto c = ev.povm(rho, e, spec);
    if (c) rec.check(label("P1 nonnegative", spec), true, -*c, kNonnegTol, instance(spec));

    if (const auto ci = ev.povm(incoherent, projective, spec)) {
      rec.check(label("P1 zero on incoherent", spec), true, *ci, closed_or(spec, 1e-9, 1e-6), [&, spec]() {
        io::Json j = trial_header("povm", trial, cfg.seed);
        j["measure"] = to_string(spec);
        j["rho"] = io::state_to_json(incoherent);
        j["measurement"] = io::povm_to_json(projective);
        return j;
      });
    }

    {
      const auto cm = ev.povm(mixture, e, spec);
      double rhs = 0.0;
      bool complete = cm.has_value();
      for (int k = 0; k < 3 && complete; ++k) {
        const auto ck = ev.povm(parts[static_cast<std::size_t>(k)], e, spec);
        if (!ck) complete = false;
        else rhs += w[static_cast<std::size_t>(k)] * *ck;
      }
      if (complete) {
        rec.check(label("P4 convexity", spec), true, *cm - rhs, closed_or(spec, 1e-8, 1e-5), [&, spec]() {
          io::Json j = instance(spec)();
          io::Json states = io::Json::array();
          for (const auto& s : parts) states.push_back(io::state_to_json(s));
          j["mixture_states"] = std::move(states);
          j["mixture_weights"] = w;
          return j;
        });
      }
    }

    if (const auto cg = ev.povm(rho, gauged, spec); c && cg) {
      rec.check(label("gauge invariance", spec), true, std::abs(*c - *cg), 1e-6, [&, spec]() {
        io::Json j = instance(spec)();
        j["gauged_measurement"] = io::povm_to_json(gauged);
        return j;
      });
    }

    if (closed && c) {
      if (const auto ce = ev.embedded(rho, e, spec)) {
        rec.check(label("direct equals embedded", spec), true, std::abs(*c - *ce), 1e-8, instance(spec));
      }
    }

    {
      const auto c1 = ev.block(eps1, ext1.pbar, spec);
      const auto c2 = ev.block(eps2, ext2.pbar, spec);
      if (c1 && c2) {
        rec.check(label("completion invariance", spec), true, std::abs(*c1 - *c2), closed_or(spec, 1e-8, 1e-6),
                  instance(spec));
      }
    }

    if (const auto cr = ev.povm(rho, computational, spec)) {
      std::optional<double> standard;
      switch (spec.kind) {
        case MeasureKind::L1: standard = standard_l1(rho.mat()); break;
        case MeasureKind::Rel: standard = standard_rel(rho.mat()); break;
        case MeasureKind::Tsallis: standard = standard_tsallis(rho.mat(), *spec.alpha); break;
        default: standard = ev.block(rho, basis, spec); break;
      }
      if (standard) {
        rec.check(label("rank-1 reduction", spec), true, std::abs(*cr - *standard), closed_or(spec, 1e-8, 1e-6),
                  [&, spec]() {
                    io::Json j = instance(spec)();
                    j["measurement"] = io::povm_to_json(computational);
                    return j;
                  });
      }
    }
  }
}

// --- naimark ----------------------------------------------------------------

void naimark_trial(const SuiteConfig& cfg, int trial, Recorder& rec) {
  const std::uint64_t seed = suite_seed(cfg.seed, Suite::Naimark);
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
  const Index dmax = std::clamp<Index>(cfg.dim_max, 1, 4);
  const auto d = static_cast<Index>(1 + rng.index(static_cast<std::size_t>(dmax)));
  const std::size_t n = 1 + rng.index(4);
  const Povm e = random_povm(d, n, rng);
  std::vector<DensityMatrix> probes;
  for (int k = 0; k < 3; ++k) probes.push_back(random_density(d, random_rank(d, rng), rng));
  const std::uint64_t completion_seed = rng.next();

  const auto instance = [&]() {
    io::Json j = trial_header("naimark", trial, cfg.seed);
    j["measurement"] = io::povm_to_json(e);
    io::Json states = io::Json::array();
    for (const auto& s : probes) states.push_back(io::state_to_json(s));
    j["probes"] = std::move(states);
    j["completion_seed"] = completion_seed;
    return j;
  };

  const NaimarkExtension ext1 = build_extension(e);
  const NaimarkExtension ext2 = build_extension(e, completion_seed);
  for (const NaimarkExtension* ext : {&ext1, &ext2}) {
    const NaimarkResiduals r = check_extension(*ext, e, probes);
    rec.check("unitarity", true, r.unitarity, 1e-10, instance);
    rec.check("first column equals Kraus", true, r.first_column, 1e-10, instance);
    rec.check("column orthogonality", true, r.column_orthogonality, 1e-9, instance);
    rec.check("row orthogonality", true, r.row_orthogonality, 1e-9, instance);
    rec.check("statistics preserved", true, r.statistics, 1e-9, instance);
    rec.check("embedding equals dilation", true, r.embedding, 1e-9, instance);
  }

  const ProjectiveMeasurement& pbar = ext1.pbar;
  CMatrix h = rng.gaussian(d, d);
  h = hermitian_part(h);
  rec.check("embedding preserves Hermiticity", true, hermiticity_residual(embed(h, e).mat), 1e-12, instance);
  for (const auto& rho : probes) {
    const CMatrix eps = embed(rho.mat(), e).mat;
    rec.check("embedding trace preserving", true, std::abs(eps.trace().real() - 1.0), 1e-10, instance);
    rec.check("embedding positive", true, -eigvalsh(hermitian_part(eps)).minCoeff(), 1e-9, instance);
    const DensityMatrix a = DensityMatrix::from_computed(ext1.v * attach_register(rho.mat(), n) * ext1.v.adjoint());
    const DensityMatrix b = DensityMatrix::from_computed(ext2.v * attach_register(rho.mat(), n) * ext2.v.adjoint());
    rec.check("l1 completion invariance", true, std::abs(c_l1_block(a, pbar).value - c_l1_block(b, pbar).value),
              1e-9, instance);
  }
}

// --- matcore ----------------------------------------------------------------

CMatrix random_psd(Index dim, Rng& rng) {
  const CMatrix g = rng.gaussian(dim, random_rank(dim, rng));
  return g * g.adjoint();
}

void matcore_trial(const SuiteConfig& cfg, int trial, Recorder& rec) {
  const std::uint64_t seed = suite_seed(cfg.seed, Suite::Matcore);
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
  const Index dmax = std::max<Index>(cfg.dim_max, 1);
  const auto header = [&]() { return trial_header("matcore", trial, cfg.seed); };

  {
    const std::size_t k = 1 + rng.index(6);
    std::vector<double> a(k), b(k);
    for (auto& x : a) x = std::exp(2.0 * rng.normal());
    for (auto& x : b) x = std::exp(2.0 * rng.normal());
    const double alpha = 0.01 + 0.98 * rng.uniform();
    const double beta = 1.01 + 2.0 * rng.uniform();
    const auto holder = [&](double s) {
      double lhs = 0.0, sa = 0.0, sb = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        lhs += a[i] * b[i];
        sa += std::pow(a[i], 1.0 / s);
        sb += std::pow(b[i], 1.0 / (1.0 - s));
      }
      return std::pair{lhs, std::pow(sa, s) * std::pow(sb, 1.0 - s)};
    };
    const auto instance = [&]() {
      io::Json j = header();
      j["a"] = a;
      j["b"] = b;
      j["alpha"] = alpha;
      j["beta"] = beta;
      return j;
    };
    const auto [lhs, rhs] = holder(alpha);
    rec.check("Holder inequality", true, (lhs - rhs) / std::max(1.0, rhs), 1e-9, instance);
    const auto [lhs2, rhs2] = holder(beta);
    rec.check("reversed Holder inequality", true, (rhs2 - lhs2) / std::max(1.0, lhs2), 1e-9, instance);
  }

  {
    const auto r = static_cast<Index>(1 + rng.index(static_cast<std::size_t>(std::max<Index>(dmax, 6))));
    const CMatrix m = random_psd(r, rng);
    const CMatrix nmat = random_psd(r, rng);
    const RVector lm = eigvalsh(m);
    const RVector ln = eigvalsh(nmat);
    const double tr = (m * nmat).trace().real();
    double upper = 0.0, lower = 0.0;
    for (Index j = 0; j < r; ++j) {
      upper += lm(j) * ln(j);
      lower += lm(r - 1 - j) * ln(j);
    }
    const double scale = std::max(1.0, upper);
    const auto instance = [&]() {
      io::Json j = header();
      j["M"] = io::to_json(m);
      j["N"] = io::to_json(nmat);
      return j;
    };
    rec.check("trace product upper bound", true, (tr - upper) / scale, 1e-9, instance);
    rec.check("trace product lower bound", true, (lower - tr) / scale, 1e-9, instance);
  }

  const auto dim = static_cast<Index>(1 + rng.index(static_cast<std::size_t>(dmax)));
  {
    const CMatrix h = hermitian_part(rng.gaussian(dim, dim));
    const EigenSystem es = eigh(h);
    const auto instance = [&]() {
      io::Json j = header();
      j["H"] = io::to_json(h);
      return j;
    };
    const CMatrix rebuilt = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    rec.check("eigh reconstruction", true, (rebuilt - h).norm() / std::max(1.0, h.norm()), 1e-10, instance);
    rec.check("eigh unitary", true, (es.vectors.adjoint() * es.vectors - CMatrix::Identity(dim, dim)).norm(), 1e-10,
              instance);
    bool sorted = true;
    for (Index j = 1; j < dim; ++j) sorted = sorted && es.values(j - 1) >= es.values(j);
    rec.check("eigh descending", true, sorted ? 0.0 : 1.0, 0.0, instance);
  }
  {
    const CMatrix m = rng.gaussian(dim, dim);
    const CMatrix u = random_unitary(dim, rng);
    const CMatrix w = random_unitary(dim, rng);
    const double base = trace_norm(m);
    rec.check("trace norm unitary invariance", true, std::abs(trace_norm(u * m * w) - base) / std::max(1.0, base),
              1e-10, [&]() {
                io::Json j = header();
                j["M"] = io::to_json(m);
                return j;
              });
  }
  {
    const CMatrix h = random_density(dim, dim, rng).mat();
    const double a = -0.5 + 2.0 * rng.uniform();
    const double b = -0.5 + 2.0 * rng.uniform();
    const CMatrix joint = psd_power(h, a + b);
    const double err = (psd_power(h, a) * psd_power(h, b) - joint).norm() / std::max(1.0, joint.norm());
    const CMatrix root = psd_power(h, 1.0 / 3.0);
    const auto instance = [&]() {
      io::Json j = header();
      j["H"] = io::to_json(h);
      j["a"] = a;
      j["b"] = b;
      return j;
    };
    rec.check("psd_power additivity", true, err, 1e-8, instance);
    rec.check("psd_power cube root", true, (root * root * root - h).norm(), 1e-8, instance);
  }
}

}  // namespace

Suite parse_suite(const std::string& name) {
  if (name == "block") return Suite::Block;
  if (name == "povm") return Suite::Povm;
  if (name == "naimark") return Suite::Naimark;
  if (name == "matcore") return Suite::Matcore;
  if (name == "all") return Suite::All;
  throw CoherenceError(ErrorKind::InvalidArgument, "unknown suite '" + name + "'");
}

const char* to_string(Suite suite) {
  switch (suite) {
    case Suite::Block: return "block";
    case Suite::Povm: return "povm";
    case Suite::Naimark: return "naimark";
    case Suite::Matcore: return "matcore";
    case Suite::All: return "all";
  }
  return "unknown";
}

std::vector<MeasureSpec> default_block_measures() {
  return {{MeasureKind::L1, std::nullopt},   {MeasureKind::Tsallis, 0.5},        {MeasureKind::Tsallis, 2.0},
          {MeasureKind::Rel, std::nullopt},  {MeasureKind::TraceNorm, std::nullopt}, {MeasureKind::Weight, std::nullopt},
          {MeasureKind::Renyi, 0.6}};
}

std::vector<MeasureSpec> default_povm_measures() { return default_block_measures(); }

bool SuiteReport::ok() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyStats& s) { return !s.fatal || s.ok(); });
}

const PropertyStats* SuiteReport::find(const std::string& name) const {
  for (const auto& s : properties)
    if (s.name == name) return &s;
  return nullptr;
}

io::Json SuiteReport::to_json() const {
  io::Json j;
  j["ok"] = ok();
  j["solver_calls"] = solver_calls;
  j["solver_flagged"] = solver_flagged;
  io::Json props = io::Json::array();
  for (const auto& s : properties) {
    io::Json p;
    p["name"] = s.name;
    p["fatal"] = s.fatal;
    p["checks"] = s.checks;
    p["passes"] = s.passes;
    p["worst_margin"] = s.checks > 0 ? io::Json(s.worst_margin) : io::Json(nullptr);
    if (s.counterexample) p["counterexample"] = *s.counterexample;
    props.push_back(std::move(p));
  }
  j["properties"] = std::move(props);
  return j;
}

std::string SuiteReport::table() const {
  std::size_t width = 8;
  for (const auto& s : properties) width = std::max(width, s.name.size());
  std::ostringstream os;
  os << std::left;
  os.width(static_cast<std::streamsize>(width + 2));
  os << "property";
  os.width(13);
  os << "pass/total" << "worst margin\n";
  for (const auto& s : properties) {
    os.width(static_cast<std::streamsize>(width + 2));
    os << s.name;
    std::ostringstream counts;
    counts << s.passes << "/" << s.checks;
    os.width(12);
    os << counts.str() << " ";
    if (s.checks > 0) {
      os.precision(3);
      os << std::scientific << s.worst_margin << std::defaultfloat;
    } else {
      os << "-";
    }
    if (!s.ok()) os << (s.fatal ? "  FAIL" : "  (advisory)");
    os << "\n";
  }
  os << "solver calls " << solver_calls << ", flagged " << solver_flagged << "\n";
  return os.str();
}

SuiteReport run(const SuiteConfig& cfg_in) {
  if (cfg_in.trials < 1) throw CoherenceError(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (cfg_in.dim_max < 1) throw CoherenceError(ErrorKind::InvalidArgument, "dim-max must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  Recorder rec(report, cfg_in.fail_fast);
  Evaluator ev(report, cfg_in.solver);

  const auto run_suite = [&](Suite suite) {
    SuiteConfig cfg = cfg_in;
    if (cfg.measures.empty()) {
      cfg.measures = suite == Suite::Povm ? default_povm_measures() : default_block_measures();
    }
    for (int t = 0; t < cfg.trials && !rec.stop(); ++t) {
      switch (suite) {
        case Suite::Block: block_trial(cfg, t, rec, ev); break;
        case Suite::Povm: povm_trial(cfg, t, rec, ev); break;
        case Suite::Naimark: naimark_trial(cfg, t, rec); break;
        case Suite::Matcore: matcore_trial(cfg, t, rec); break;
        case Suite::All: break;
      }
    }
  };

  if (cfg_in.suite == Suite::All) {
    for (Suite s : {Suite::Matcore, Suite::Naimark, Suite::Block, Suite::Povm}) run_suite(s);
  } else {
    run_suite(cfg_in.suite);
  }

  if (report.solver_calls > 0) {
    const double rate = static_cast<double>(report.solver_flagged) / report.solver_calls;
    rec.check("solver certified on 95% of calls", true, rate, 0.05, [&]() {
      io::Json j;
      j["solver_calls"] = report.solver_calls;
      j["solver_flagged"] = report.solver_flagged;
      return j;
    });
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace coherence::verify
