#include "commands.hpp"

#include <algorithm>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <list>
#include <map>

#include "acceptance.hpp"
#include "fblab/blowup.hpp"
#include "fblab/counterexamples.hpp"
#include "fblab/csv.hpp"
#include "fblab/diagnostics.hpp"
#include "fblab/errors.hpp"
#include "fblab/identity.hpp"
#include "fblab/monotonicity.hpp"
#include "fblab/montecarlo.hpp"
#include "fblab/parallel.hpp"
#include "fblab/solver.hpp"

#ifndef FBLAB_VERSION
#define FBLAB_VERSION "unknown"
#endif

namespace fblab::app {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// inf / nan as strings
json number(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

struct Run {
  Run(const RunConfig& c, fs::path d, bool q) : cfg(c), dir(std::move(d)), quiet(q) {}

  const RunConfig& cfg;
  fs::path dir;
  bool quiet = false;
  json summary = json::object();
  json checks = json::array();
  std::vector<std::string> files;
  std::list<std::ofstream> streams;
  bool failed = false;

  std::ofstream& csv(const std::string& name) {
    files.push_back(name);
    std::ofstream& os = streams.emplace_back(dir / name);
    if (!os) throw Error("cannot write " + (dir / name).string());
    return os;
  }
  void check(const std::string& name, bool ok, const std::string& detail) {
    checks.push_back({{"name", name}, {"pass", ok}, {"detail", detail}});
    failed = failed || !ok;
    if (!quiet) std::cout << (ok ? "  ok    " : "  FAIL  ") << name << (detail.empty() ? "" : ": " + detail) << "\n";
  }
};

std::string num(double v) { return format_double(v); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(std::max(n, 2)));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a + (b - a) * static_cast<double>(k) / (out.size() - 1);
  return out;
}

std::vector<double> finite(const std::vector<SweepRow>& rows, double SweepRow::*field) {
  std::vector<double> out;
  for (const SweepRow& r : rows)
    if (r.ok && !std::isnan(r.*field)) out.push_back(r.*field);
  return out;
}

void write_field(std::ostream& os, const std::vector<std::pair<std::string, const ScalarField2D*>>& cols) {
  std::vector<std::string> header{"x", "y"};
  for (const auto& c : cols) header.push_back(c.first);
  CsvWriter w(os, header);
  const ScalarField2D& f = *cols.front().second;
  const Grid2D& g = f.grid();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!f.defined(i, j)) continue;
      if (cols.size() == 1) {
        w.row(g.x(i), g.y(j), f(i, j));
      } else {
        w.row(g.x(i), g.y(j), f(i, j), (*cols[1].second)(i, j));
      }
    }
  }
}

void cmd_solve(Run& run) {
  const NavierProblem p = make_problem(run.cfg, run.cfg.solver.n);
  const SolveResult r = solve_navier(p);
  write_field(run.csv("solution.csv"), {{"u", &r.u}});
  write_trace_csv(run.csv("trace.csv"), r.report);
  run.summary = {{"n", run.cfg.solver.n},
                 {"eps", p.eps},
                 {"iterations", r.report.iterations},
                 {"converged", r.report.converged},
                 {"final_residual", number(r.report.final_residual)},
                 {"energy", number(r.report.energy)},
                 {"transition_area", number(r.report.transition_area)},
                 {"notes", r.report.notes}};
  run.check("converged", r.report.converged && r.report.final_residual <= p.tol.residual_tol,
            std::to_string(r.report.iterations) + " iterations, residual " + num(r.report.final_residual));
}

void cmd_sweep(Run& run) {
  const ConvergenceReport rep = eps_sweep(make_problem(run.cfg, run.cfg.sweep.n), run.cfg.sweep.eps);
  write_sweep_csv(run.csv("sweep.csv"), rep);
  int ok = 0;
  for (const SweepRow& r : rep.rows) ok += r.ok;
  const auto sup = finite(rep.rows, &SweepRow::sup_diff);
  const auto lap = finite(rep.rows, &SweepRow::lap_l2_diff);
  const auto area = finite(rep.rows, &SweepRow::transition_area);
  run.summary = {{"rows", rep.rows.size()}, {"solved", ok}};
  run.check("all solves converged", ok == static_cast<int>(rep.rows.size()),
            std::to_string(ok) + "/" + std::to_string(rep.rows.size()));
  run.check("sup differences decreasing", strictly_decreasing(sup), std::to_string(sup.size()) + " differences");
  run.check("Laplacian L2 differences decreasing", strictly_decreasing(lap), std::to_string(lap.size()) + " differences");
  run.check("transition measure decreasing", strictly_decreasing(area), std::to_string(area.size()) + " values");
}

void cmd_monotonicity(Run& run) {
  const auto& m = run.cfg.monotonicity;
  const auto radii = geometric_radii(m.r_min, m.r_max, m.radii);
  const DissipationVariant variant = dissipation_variant(m.variant);
  std::vector<double> defects;
  json grids = json::array();
  for (int n : m.grids) {
    const NavierProblem p = make_problem(run.cfg, n);
    const SolveResult s = solve_navier(p);
    const Point2 c = free_boundary_center(s.u, run.cfg);
    const WeissContext ctx(s.u, p.eps, p.bump(), m.n_theta);
    const WeissReport rep = monotonicity_check(ctx, c, radii, variant, m.tol_factor);
    write_weiss_csv(run.csv("weiss_n" + std::to_string(n) + ".csv"), rep);
    const double worst = rep.identity_defect.empty()
                             ? 0.0
                             : *std::max_element(rep.identity_defect.begin(), rep.identity_defect.end());
    defects.push_back(worst);
    grids.push_back({{"n", n},
                     {"center", {c.x, c.y}},
                     {"monotone", rep.monotone},
                     {"max_defect", number(worst)},
                     {"warnings", rep.warnings}});
    run.check("E nondecreasing, n = " + std::to_string(n), rep.monotone, "max |dE - D| " + num(worst));
  }
  run.summary = {{"variant", m.variant}, {"radii", radii}, {"grids", grids}};
  if (defects.size() > 1) run.check("defect decreasing under refinement", strictly_decreasing(defects), "");
}

void cmd_identity(Run& run) {
  const auto& id = run.cfg.identity;
  std::vector<double> res;
  json grids = json::array();
  for (int n : id.grids) {
    const NavierProblem p = make_problem(run.cfg, n);
    const SolveResult s = solve_navier(p);
    const IdentitySuiteReport rep = identity_suite(s.u, p.eps, id.fields, run.cfg.run.seed);
    write_identity_csv(run.csv("identity_n" + std::to_string(n) + ".csv"), rep);
    res.push_back(rep.max_residual);
    grids.push_back({{"n", n},
                     {"max_residual", number(rep.max_residual)},
                     {"median_residual", number(rep.median_residual)},
                     {"max_relative_defect", number(rep.max_relative_defect)}});
    if (s.u.grid().h <= 1.0 / 128 + 1e-15)
      run.check("max residual <= 5e-2, n = " + std::to_string(n), rep.max_residual <= 5e-2, num(rep.max_residual));
  }
  run.summary = {{"fields", id.fields}, {"seed", run.cfg.run.seed}, {"grids", grids}};
  if (res.size() > 1) run.check("residual decreasing under refinement", strictly_decreasing(res), "");
}

void cmd_blowup(Run& run) {
  const NavierProblem p = make_problem(run.cfg, run.cfg.solver.n);
  const SolveResult s = solve_navier(p);
  const Point2 c = free_boundary_center(s.u, run.cfg);
  const auto steps = blowup_sequence(s.u, c, run.cfg.blowup.radii, run.cfg.blowup.tol);
  std::vector<DetachmentFit> fits;
  std::vector<DetachmentClass> classes;
  {
    auto& os = run.csv("blowup.csv");
    CsvWriter w(os, {"r", "cauchy_gap", "sup", "alpha", "gamma", "label"});
    for (const BlowupStep& b : steps) {
      w.row(b.r, b.cauchy_gap, b.sup, b.fit.alpha, b.fit.gamma, std::string(to_string(b.cls.label)));
      fits.push_back(b.fit);
      classes.push_back(b.cls);
    }
  }
  write_detachment_csv(run.csv("detachment.csv"), fits, classes);
  bool forbidden = false;
  json labels = json::array();
  for (const auto& cl : classes) {
    forbidden = forbidden || cl.label == DetachmentLabel::forbidden;
    labels.push_back(to_string(cl.label));
  }
  run.summary = {{"center", {c.x, c.y}}, {"labels", labels}};
  run.check("no forbidden detachment", !forbidden, "");
}

void cmd_counterexample(Run& run) {
  const auto& ce = run.cfg.counterexample;
  write_contr_blowup_csv(run.csv("contr_blowup.csv"), contr_blowup_report(ce.eps));
  for (double eps : ce.eps) {
    const double probe = std::pow(eps, 0.25);
    write_contr_profile_csv(run.csv("profile_eps_" + num(eps) + ".csv"), eps,
                            linspace(-0.25 * probe, 3 * probe, ce.samples));
    const ContrFamily f(eps);
    const auto ts = linspace(0.0, eps, ce.samples);
    std::vector<double> beta;
    for (double t : ts) beta.push_back(f.beta(t));
    write_beta_csv(run.csv("beta_eps_" + num(eps) + ".csv"), ts, beta);
  }
  for (int k : ce.k) {
    auto& os = run.csv("example_k" + std::to_string(k) + ".csv");
    CsvWriter w(os, {"x", "u", "du", "u4"});
    for (double x : linspace(-0.5, 3.0, ce.samples)) {
      const ExampleValue v = example_u(x, k);
      w.row(x, v.u, v.du, example_u4(x, k));
    }
  }
  for (int id : {1, 2}) {
    const CriterionResult r = run_criterion(id, run.cfg);
    run.check(r.name, r.pass, r.detail);
  }
  run.summary = {{"eps", ce.eps}, {"k", ce.k}};
}

void cmd_montecarlo(Run& run) {
  const auto& mc = run.cfg.montecarlo;
  const Grid2D g = Grid2D::square(mc.n, 0, 1);
  auto make = [&](double (*prize)(double, double), double penalty) {
    GameConfig gc(ScalarField2D::rectangle(g, prize), ScalarField2D::rectangle(g, penalty));
    gc.samples = mc.samples;
    gc.t_max = mc.t_max;
    gc.dimension = mc.dimension;
    gc.eps = mc.eps;
    gc.seed = run.cfg.run.seed;
    return gc;
  };
  const auto probes = default_probes(g);
  const GameReport harmonic = validate_game_vs_pde(make([](double x, double y) { return x * y; }, 0.0), probes);
  const GameReport penalty =
      validate_game_vs_pde(make([](double x, double y) { return x * x + y * y; }, mc.penalty), probes);
  write_game_csv(run.csv("game_harmonic.csv"), harmonic);
  write_game_csv(run.csv("game_penalty.csv"), penalty);

  const NavierProblem p = make_problem(run.cfg, mc.n);
  GameConfig coupled(p.boundary_data, p.boundary_data.with_values([](double, double) { return 0.0; }));
  coupled.eps = p.eps;
  const CoupledSolution cs = coupled_stationary_solve(coupled);
  write_field(run.csv("coupled.csv"), {{"u", &cs.u}, {"v", &cs.v}});
  const double diff = max_abs_diff(cs.u, solve_navier(p).u);

  run.summary = {{"samples", mc.samples},
                 {"workers", worker_count()},
                 {"censored_fraction", {number(harmonic.censored_fraction), number(penalty.censored_fraction)}},
                 {"coupled_vs_navier", number(diff)}};
  run.check("harmonic probes within 3 SE", harmonic.within_3se >= 8, std::to_string(harmonic.within_3se) + "/10");
  run.check("penalty probes within 3 SE", penalty.within_3se >= 8, std::to_string(penalty.within_3se) + "/10");
  run.check("coupled solve matches Navier solve", diff <= 1e-10, num(diff));
  const double cens = std::max(harmonic.censored_fraction, penalty.censored_fraction);
  run.check("censored fraction <= 1e-3", cens <= 1e-3, num(cens));
}

void cmd_decay(Run& run) {
  const auto& d = run.cfg.decay;
  const NavierProblem p = make_problem(run.cfg, run.cfg.solver.n);
  const SolveResult s = solve_navier(p);
  std::vector<DecayReport> rows;
  for (double div : d.divisors) rows.push_back(decay_estimate_check(s.u, p.eps, {d.x0, d.y0}, d.r0 / div, d.r0));
  write_decay_csv(run.csv("decay.csv"), rows);
  double lo = INFINITY, hi = 0.0;
  for (const DecayReport& r : rows) {
    lo = std::min(lo, r.fitted_C);
    hi = std::max(hi, r.fitted_C);
  }
  const double ratio = lo > 0 ? hi / lo : INFINITY;
  run.summary = {{"ratio", number(ratio)}};
  run.check("fitted C varies by at most x4", ratio <= 4.0, "ratio " + num(ratio));
}

void cmd_acceptance(Run& run) {
  auto& os = run.csv("acceptance.csv");
  CsvWriter w(os, {"id", "name", "pass", "seconds", "time_limit", "detail"});
  json metrics = json::object();
  run_acceptance(run.cfg, [&](const CriterionResult& r) {
    w.row(r.id, r.name, r.pass, r.seconds, r.time_limit, r.detail);
    json m = json::object();
    for (const auto& [k, v] : r.metrics) m[k] = number(v);
    metrics[std::to_string(r.id)] = m;
    run.check("[" + std::to_string(r.id) + "] " + r.name, r.pass, r.detail);
  });
  run.summary = {{"metrics", metrics}};
}

const std::map<std::string, std::function<void(Run&)>>& table() {
  static const std::map<std::string, std::function<void(Run&)>> t = {
      {"solve", cmd_solve},       {"sweep", cmd_sweep},
      {"monotonicity", cmd_monotonicity}, {"identity", cmd_identity},
      {"blowup", cmd_blowup},     {"counterexample", cmd_counterexample},
      {"montecarlo", cmd_montecarlo}, {"decay", cmd_decay},
      {"all", cmd_acceptance},
  };
  return t;
}

json versions() {
  return {{"fblab", FBLAB_VERSION},
          {"compiler", __VERSION__},
          {"cxx_standard", __cplusplus},
          {"boost", BOOST_LIB_VERSION},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

int run_one(const std::string& name, const RunConfig& cfg, bool quiet, const std::string& source) {
  Run run(cfg, fs::path(cfg.run.out) / name, quiet);
  const auto t0 = std::chrono::steady_clock::now();
  json manifest = {{"subcommand", name},
                   {"inputs", {{"config_source", source}, {"config", serialize_config(cfg)}}},
                   {"seed", cfg.run.seed},
                   {"versions", versions()},
                   {"workers", worker_count()}};
  int code = kOk;
  if (!quiet) std::cout << name << " -> " << run.dir.string() << "\n";
  try {
    fs::create_directories(run.dir);
    table().at(name)(run);
    code = run.failed ? kCheckFailed : kOk;
    manifest["status"] = run.failed ? "check_failed" : "ok";
  } catch (const Error& e) {
    code = kError;
    json err = {{"kind", e.kind()}, {"message", e.what()}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) err["line"] = pe->line();
    manifest["status"] = "error";
    manifest["error"] = err;
    std::cerr << json{{"error", err}, {"subcommand", name}}.dump() << "\n";
  } catch (const std::exception& e) {
    code = kError;
    json err = {{"kind", "internal"}, {"message", e.what()}};
    manifest["status"] = "error";
    manifest["error"] = err;
    std::cerr << json{{"error", err}, {"subcommand", name}}.dump() << "\n";
  }
  manifest["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["files"] = run.files;
  manifest["checks"] = run.checks;
  manifest["summary"] = run.summary;
  manifest["exit_code"] = code;
  std::error_code ec;
  if (fs::is_directory(run.dir, ec)) {
    std::ofstream(run.dir / "manifest.json") << manifest.dump(2) << "\n";
    if (code == kError) std::ofstream(run.dir / "error.json") << manifest["error"].dump(2) << "\n";
  }
  return code;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"solve",          "sweep",      "monotonicity", "identity", "blowup",
                                              "counterexample", "montecarlo", "decay",        "all"};
  return names;
}

int run_subcommand(const std::string& name, const RunConfig& cfg, bool quiet, const std::string& config_source) {
  if (!table().count(name)) throw ParameterError("unknown subcommand " + name);
  if (name != "all") return run_one(name, cfg, quiet, config_source);
  int worst = kOk;
  for (const std::string& sub : subcommands()) {
    const int code = run_one(sub, cfg, quiet, config_source);
    if (code == kError || (code == kCheckFailed && worst == kOk)) worst = code;
  }
  return worst;
}

}  // namespace fblab::app
