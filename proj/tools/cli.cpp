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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "coherence/io.hpp"
#include "coherence/povmcoh.hpp"
#include "coherence/verify.hpp"

namespace coherence::cli {

namespace {

using io::Json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedInput:
    case ErrorKind::InvalidArgument:
    case ErrorKind::BadAlpha:
    case ErrorKind::DimMismatch:
      return kMalformedInput;
    case ErrorKind::NotHermitian:
    case ErrorKind::NotPsd:
    case ErrorKind::SupportViolation:
    case ErrorKind::InvariantViolation:
    case ErrorKind::DegenerateSample:
      return kInvalidInput;
    case ErrorKind::NoConvergence:
    case ErrorKind::SolverFailure:
      return kSolverFailure;
    case ErrorKind::CompletionFailure:
      return kCompletionFailure;
  }
  return kInvalidInput;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("COHERENCE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    throw CoherenceError(ErrorKind::InvalidArgument, "COHERENCE_SEED must be an unsigned integer");
  }
  return 0;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit(std::ostream& out, const std::string& path, const Json& j) {
  if (path.empty() || path == "-") {
    out << io::dump(j) << '\n';
  } else {
    io::write_json(path, j);
  }
}

std::vector<std::string> split(const std::string& list, char sep) {
  std::vector<std::string> items;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

Json residuals_json(const SolverResiduals& r) {
  Json j;
  j["feasibility"] = r.feasibility;
  j["stationarity"] = r.stationarity;
  j["primal_infeasibility"] = r.primal_infeasibility;
  j["dual_infeasibility"] = r.dual_infeasibility;
  return j;
}

// --- measure ----------------------------------------------------------------

struct MeasureArgs {
  std::string state;
  std::string measurement;
  std::string measures;
  std::string route = "direct";
  std::string format = "json";
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool timing = false;
};

struct Row {
  MeasureSpec spec;
  std::string route;
  double value = 0.0;
  bool converged = true;
  bool flagged = false;
  int iterations = 0;
  SolverResiduals residuals;
  std::optional<double> embedded_value;
  std::optional<double> difference;
  double millis = 0.0;
};

void fill(Row& row, const MeasureResult& r) {
  row.value = r.value;
  row.converged = r.diagnostics.converged;
  row.flagged = !r.diagnostics.converged;
  row.iterations = r.diagnostics.iterations;
  row.residuals = r.diagnostics.residuals;
}

int cmd_measure(const MeasureArgs& args, std::ostream& out) {
  const Json state_json = io::read_json(args.state);
  const Json meas_json = io::read_json(args.measurement);
  const DensityMatrix rho = io::state_from_json(state_json);
  const io::Measurement measurement = io::measurement_from_json(meas_json);
  const bool projective = std::holds_alternative<ProjectiveMeasurement>(measurement);
  const Index mdim = projective ? std::get<ProjectiveMeasurement>(measurement).dim() : std::get<Povm>(measurement).dim();
  if (mdim != rho.dim()) {
    throw CoherenceError(ErrorKind::DimMismatch, "state dimension " + std::to_string(rho.dim()) +
                                                     " does not match measurement dimension " + std::to_string(mdim));
  }

  std::vector<MeasureSpec> specs;
  for (const auto& item : split(args.measures, ',')) specs.push_back(parse_measure(item));
  if (specs.empty()) throw CoherenceError(ErrorKind::InvalidArgument, "--measures is empty");

  const Route route = args.route == "embedded" ? Route::Embedded : args.route == "both" ? Route::Both : Route::Direct;
  const std::uint64_t seed = args.seed ? *args.seed : default_seed();
  SolverConfig solver;
  solver.seed = seed;
  if (args.tol) {
    if (!(*args.tol > 0.0)) throw CoherenceError(ErrorKind::InvalidArgument, "--tol must be positive");
    solver.gap_tol = *args.tol;
    solver.report_tol = std::max(solver.report_tol, *args.tol);
  }

  int code = kOk;
  std::vector<Row> rows;
  for (const MeasureSpec& spec : specs) {
    Row row;
    row.spec = spec;
    const MeasureParams params = params_for(spec, solver);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (projective) {
        row.route = "block";
        fill(row, block_measure(rho, std::get<ProjectiveMeasurement>(measurement), spec.kind, params));
      } else {
        const PovmEvaluation ev = evaluate({rho, std::get<Povm>(measurement), spec.kind, params, route});
        if (ev.direct) {
          row.route = ev.embedded ? "both" : "direct";
          fill(row, *ev.direct);
          if (ev.embedded) {
            row.embedded_value = ev.embedded->value;
            row.difference = ev.difference;
          }
        } else {
          row.route = "embedded";
          fill(row, *ev.embedded);
        }
      }
    } catch (const SolverFailure& failure) {
      const SolverOutcome& best = failure.best_iterate();
      if (row.route.empty()) row.route = projective ? "block" : "embedded";
      row.value = value_from_objective(spec.kind, best.objective, params.alpha);
      row.converged = false;
      row.flagged = true;
      row.iterations = best.iterations;
      row.residuals = best.residuals;
    }
    if (row.flagged) code = kSolverFailure;
    row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
  }

  if (args.format == "table") {
    std::size_t width = 7;
    for (const auto& r : rows) width = std::max(width, to_string(r.spec).size());
    std::ostringstream os;
    os << std::left;
    os.width(static_cast<std::streamsize>(width + 2));
    os << "measure";
    os.width(26);
    os << "value";
    os.width(10);
    os << "route";
    os.width(11);
    os << "converged";
    os << "time_ms\n";
    for (const auto& r : rows) {
      os.width(static_cast<std::streamsize>(width + 2));
      os << to_string(r.spec);
      os.width(26);
      os << fmt(r.value);
      os.width(10);
      os << r.route;
      os.width(11);
      os << (r.converged ? "yes" : "FLAGGED");
      char ms[32];
      std::snprintf(ms, sizeof ms, "%.3f", r.millis);
      os << ms;
      if (r.difference) os << "  embedded " << fmt(*r.embedded_value) << " diff " << fmt(*r.difference);
      os << "\n";
    }
    out << os.str();
    return code;
  }

  Json report;
  report["state"] = {{"path", args.state}, {"digest", io::digest(state_json)}, {"dim", rho.dim()}};
  report["measurement"] = {{"path", args.measurement},
                           {"type", projective ? "projective" : "povm"},
                           {"digest", io::digest(meas_json)}};
  report["seed"] = seed;
  Json results = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["measure"] = to_string(r.spec.kind);
    j["alpha"] = r.spec.alpha ? Json(*r.spec.alpha) : Json(nullptr);
    j["route"] = r.route;
    j["value"] = r.value;
    j["converged"] = r.converged;
    j["flagged"] = r.flagged;
    j["iterations"] = r.iterations;
    j["residuals"] = residuals_json(r.residuals);
    if (r.embedded_value) j["embedded_value"] = *r.embedded_value;
    if (r.difference) j["difference"] = *r.difference;
    if (args.timing) j["wall_time_ms"] = r.millis;
    results.push_back(std::move(j));
  }
  report["results"] = std::move(results);
  out << io::dump(report) << '\n';
  return code;
}

// --- naimark ----------------------------------------------------------------

struct NaimarkArgs {
  std::string povm;
  std::string out;
  bool verify = false;
  std::optional<std::uint64_t> seed;
};

int cmd_naimark(const NaimarkArgs& args, std::ostream& out) {
  const io::Measurement m = io::measurement_from_json(io::read_json(args.povm));
  const Povm e = std::holds_alternative<Povm>(m)
                     ? std::get<Povm>(m)
                     : Povm::from_effects(std::get<ProjectiveMeasurement>(m).projectors());
  const NaimarkExtension ext = build_extension(e);
  io::write_json(args.out, io::extension_to_json(ext));
  if (!args.verify) return kOk;

  Rng rng(args.seed ? *args.seed : default_seed());
  std::vector<DensityMatrix> probes{DensityMatrix::maximally_mixed(e.dim())};
  for (int k = 0; k < 10; ++k) probes.push_back(random_density(e.dim(), e.dim(), rng));
  const NaimarkResiduals r = check_extension(ext, e, probes);
  const std::vector<std::tuple<const char*, double, double>> checks{
      {"unitarity", r.unitarity, 1e-10},
      {"first_column", r.first_column, 1e-10},
      {"column_orthogonality", r.column_orthogonality, 1e-9},
      {"row_orthogonality", r.row_orthogonality, 1e-9},
      {"statistics", r.statistics, 1e-9},
      {"embedding", r.embedding, 1e-9},
  };
  Json report;
  bool ok = true;
  for (const auto& [name, value, tol] : checks) {
    report[name] = {{"residual", value}, {"tolerance", tol}, {"pass", value <= tol}};
    ok = ok && value <= tol;
  }
  report["ok"] = ok;
  out << io::dump(report) << '\n';
  return ok ? kOk : kPropertyViolation;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  int trials = 20;
  int dim_max = 4;
  std::optional<std::uint64_t> seed;
  bool fail_fast = false;
  std::string format = "table";
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  if (args.trials < 1) throw CoherenceError(ErrorKind::InvalidArgument, "--trials must be >= 1");
  if (args.dim_max < 2) throw CoherenceError(ErrorKind::InvalidArgument, "--dim-max must be >= 2");
  verify::SuiteConfig cfg;
  cfg.suite = verify::parse_suite(args.suite);
  cfg.trials = args.trials;
  cfg.dim_max = args.dim_max;
  cfg.seed = args.seed ? *args.seed : default_seed();
  cfg.fail_fast = args.fail_fast;
  const verify::SuiteReport report = verify::run(cfg);
  if (args.format == "json") {
    out << io::dump(report.to_json()) << '\n';
  } else {
    out << report.table();
    for (const auto& p : report.properties) {
      if (p.fatal && !p.ok() && p.counterexample) out << "counterexample:\n" << io::dump(*p.counterexample) << '\n';
    }
  }
  return report.ok() ? kOk : kPropertyViolation;
}

// --- random -----------------------------------------------------------------

struct RandomArgs {
  std::string kind;
  int dim = 0;
  std::optional<int> rank;
  std::optional<std::string> blocks;
  std::optional<int> outcomes;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_random(const RandomArgs& args, std::ostream& out) {
  const auto bad = [](const std::string& what) { throw CoherenceError(ErrorKind::InvalidArgument, what); };
  if (args.dim < 1) bad("--dim must be >= 1");
  const Index dim = args.dim;
  Rng rng(args.seed ? *args.seed : default_seed());
  Json j;
  if (args.kind == "state") {
    if (args.blocks || args.outcomes) bad("--kind state takes only --rank");
    const int rank = args.rank.value_or(args.dim);
    if (rank < 1 || rank > args.dim) bad("--rank must lie in [1, dim]");
    j = io::state_to_json(random_density(dim, rank, rng));
  } else if (args.kind == "projective") {
    if (args.rank || args.outcomes) bad("--kind projective takes only --blocks");
    std::vector<Index> dims;
    if (args.blocks) {
      for (const auto& item : split(*args.blocks, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
          v = std::stoi(item, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != item.size() || v < 1) bad("--blocks entries must be positive integers");
        dims.push_back(v);
      }
    } else {
      dims.assign(static_cast<std::size_t>(dim), 1);
    }
    Index total = 0;
    for (Index d : dims) total += d;
    if (total != dim) bad("--blocks must sum to --dim");
    j = io::projective_to_json(random_projective(dim, dims, rng));
  } else if (args.kind == "povm") {
    if (args.rank || args.blocks) bad("--kind povm takes only --outcomes");
    const int n = args.outcomes.value_or(args.dim);
    if (n < 1) bad("--outcomes must be >= 1");
    j = io::povm_to_json(random_povm(dim, static_cast<std::size_t>(n), rng));
  } else {
    bad("--kind must be state, projective or povm");
  }
  emit(out, args.out, j);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Block and POVM coherence measures", "coherence"};
  app.require_subcommand(1);

  MeasureArgs measure;
  auto* m = app.add_subcommand("measure", "Evaluate coherence measures of a state");
  m->add_option("--state", measure.state, "State file")->required();
  m->add_option("--measurement", measure.measurement, "Projective measurement or POVM file")->required();
  m->add_option("--measures", measure.measures, "Comma list: l1, tsallis:<a>, rel, trace, weight, renyi:<a>")
      ->required();
  m->add_option("--route", measure.route, "POVM route")->check(CLI::IsMember({"direct", "embedded", "both"}));
  m->add_option("--format", measure.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  m->add_option("--tol", measure.tol, "Solver gap tolerance");
  m->add_option("--seed", measure.seed, "Seed (default COHERENCE_SEED or 0)");
  m->add_flag("--timing", measure.timing, "Include wall times in JSON output");

  NaimarkArgs naimark;
  auto* n = app.add_subcommand("naimark", "Write the canonical Naimark extension of a POVM");
  n->add_option("--povm", naimark.povm, "POVM file")->required();
  n->add_option("--out", naimark.out, "Output file")->required();
  n->add_flag("--verify", naimark.verify, "Check the extension and print residuals");
  n->add_option("--seed", naimark.seed, "Seed for probe states");

  VerifyArgs verify_args;
  auto* v = app.add_subcommand("verify", "Run randomized property suites");
  v->add_option("--suite", verify_args.suite, "Suite")
      ->check(CLI::IsMember({"block", "povm", "naimark", "matcore", "all"}));
  v->add_option("--trials", verify_args.trials, "Trials per suite");
  v->add_option("--dim-max", verify_args.dim_max, "Largest dimension");
  v->add_option("--seed", verify_args.seed, "Seed (default COHERENCE_SEED or 0)");
  v->add_flag("--fail-fast", verify_args.fail_fast, "Stop at the first fatal violation");
  v->add_option("--format", verify_args.format, "Output format")->check(CLI::IsMember({"json", "table"}));

  RandomArgs random;
  auto* r = app.add_subcommand("random", "Generate a random instance file");
  r->add_option("--kind", random.kind, "state, projective or povm")->required();
  r->add_option("--dim", random.dim, "Dimension")->required();
  auto* rank = r->add_option("--rank", random.rank, "State rank");
  auto* blocks = r->add_option("--blocks", random.blocks, "Block dimensions, e.g. 2,2");
  auto* outcomes = r->add_option("--outcomes", random.outcomes, "POVM outcomes");
  rank->excludes(blocks)->excludes(outcomes);
  blocks->excludes(outcomes);
  r->add_option("--seed", random.seed, "Seed (default COHERENCE_SEED or 0)");
  r->add_option("--out", random.out, "Output file (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }

  try {
    if (m->parsed()) return cmd_measure(measure, out);
    if (n->parsed()) return cmd_naimark(naimark, out);
    if (v->parsed()) return cmd_verify(verify_args, out);
    if (r->parsed()) return cmd_random(random, out);
  } catch (const CoherenceError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }
  return kMalformedInput;
}

}  // namespace coherence::cli
