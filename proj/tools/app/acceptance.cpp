#include "acceptance.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "fblab/blowup.hpp"
#include "fblab/counterexamples.hpp"
#include "fblab/diagnostics.hpp"
#include "fblab/errors.hpp"
#include "fblab/identity.hpp"
#include "fblab/monotonicity.hpp"
#include "fblab/montecarlo.hpp"
#include "fblab/operators.hpp"
#include "fblab/solver.hpp"

namespace fblab::app {
namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kPi = std::numbers::pi;

double gk(const auto& f, double a, double b) { return gauss_kronrod<double, 61>::integrate(f, a, b, 8, 1e-10); }

// collects metrics and the pass flag of one criterion
struct Check {
  CriterionResult& r;
  std::ostringstream text;

  void metric(const std::string& key, double v) { r.metrics.emplace_back(key, v); }
  void require(bool ok, const std::string& what) {
    if (!ok) {
      r.pass = false;
      text << (text.tellp() > 0 ? "; " : "") << "failed: " << what;
    }
  }
  void note(const std::string& s) { text << (text.tellp() > 0 ? "; " : "") << s; }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

double max_over_defined(const ScalarField2D& f, auto&& err) {
  const Grid2D& g = f.grid();
  double m = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (f.defined(i, j)) m = std::max(m, std::abs(err(g.x(i), g.y(j), f(i, j))));
  return m;
}

// least-squares slope of log y against log x
double fitted_order(const std::vector<double>& h, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double x = std::log(h[k]), y = std::log(e[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// first counterexample: probe value, branch ODE, extended forcing mass
void counterexample_one(const RunConfig& cfg, Check& c) {
  double worst_probe = 0.0, worst_ode = 0.0, worst_mass = 0.0;
  bool sign_flipped = true;
  for (double eps : cfg.counterexample.eps) {
    const double u2 = contr_u(std::pow(eps, 0.25), eps)[2];
    const double ref = 10 + 2 * std::log(2 * eps);
    worst_probe = std::max(worst_probe, std::abs(std::abs(u2) - std::abs(ref)) / std::abs(ref));
    sign_flipped = sign_flipped && (u2 * ref < 0);

    const ContrFamily f(eps);
    const int m = std::max(cfg.counterexample.samples, 2);
    for (int k = 1; k <= m; ++k) {
      const auto d = f.u(f.branch_end() * k / m);
      const double b = f.beta(d[0]);
      worst_ode = std::max(worst_ode, std::abs(2 * d[4] + b) / (std::abs(2 * d[4]) + std::abs(b)));
    }
    auto beta = [&](double t) { return f.beta(t); };
    const double i = f.iota();
    const double mass = gk(beta, 0.0, i) + gk(beta, i, 2 * i) + gk(beta, 2 * i, eps);
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
  }
  c.metric("probe_rel_error", worst_probe);
  c.metric("ode_rel_residual", worst_ode);
  c.metric("mass_error", worst_mass);
  c.require(worst_probe <= 1e-10, "probe |u''| vs |10 + 2 log 2eps| rel " + num(worst_probe));
  c.require(worst_ode <= 1e-8, "ODE residual rel " + num(worst_ode));
  c.require(worst_mass <= 1e-6, "forcing mass error " + num(worst_mass));
  c.note("probe rel " + num(worst_probe) + ", ODE rel " + num(worst_ode) + ", mass err " + num(worst_mass));
  if (sign_flipped) c.note("computed u'' = -(10 + 2 log 2eps)");
}

// second counterexample: slope k at 1, sup bound, zero on the left
void counterexample_two(const RunConfig& cfg, Check& c) {
  double worst_slope = 0.0, worst_sup_ratio = 0.0, worst_left = 0.0;
  for (int k : cfg.counterexample.k) {
    const double eps = 1.0 / (static_cast<double>(k) * k);
    worst_slope = std::max(worst_slope, std::abs(example_u(1.0, k).du - k));
    double sup = 0.0;
    const int m = 4000;
    for (int s = 1; s <= m; ++s) {
      // x k spans (0, 250], past the last bump of the profile
      const double x = 250.0 * s / m / k;
      sup = std::max(sup, std::abs(example_u(x, k).u));
    }
    worst_sup_ratio = std::max(worst_sup_ratio, sup / eps);
    for (double x : {-100.0, -1.0, -1e-3, -1e-12, 0.0}) {
      const ExampleValue v = example_u(x, k);
      worst_left = std::max({worst_left, std::abs(v.u), std::abs(v.du)});
    }
  }
  c.metric("slope_error", worst_slope);
  c.metric("sup_over_eps", worst_sup_ratio);
  c.metric("left_max", worst_left);
  c.require(worst_slope <= 1e-8, "u'(1) - k = " + num(worst_slope));
  // rounding slack only
  c.require(worst_sup_ratio <= 1.0 + 1e-12, "sup|u| / eps_k = " + num(worst_sup_ratio));
  c.require(worst_left == 0.0, "nonzero on (-inf, 0]");
  c.note("slope err " + num(worst_slope) + ", sup/eps - 1 = " + num(worst_sup_ratio - 1.0));
}

void stencil_suite(Check& c) {
  // exactness on monomials, grid [-1, 1]^2 with h = 1/8
  const Grid2D g = Grid2D::square(17, -1, 1);
  double lap_err = 0.0, bilap_err = 0.0;
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; a + b <= 4; ++b) {
      auto mono = [a, b](double x, double y) { return std::pow(x, a) * std::pow(y, b); };
      const ScalarField2D f = ScalarField2D::rectangle(g, mono);
      auto pw = [](double x, int e) { return e < 0 ? 0.0 : std::pow(x, e); };
      if (a + b <= 3) {
        lap_err = std::max(lap_err, max_over_defined(laplacian(f), [&](double x, double y, double v) {
                             return v - (a * (a - 1) * pw(x, a - 2) * pw(y, b) + b * (b - 1) * pw(x, a) * pw(y, b - 2));
                           }));
      }
      // degree 4 exactness holds for x^4, y^4, x^2 y^2, x^3 y and x y^3, which is every quartic monomial
      const double d4 = (a == 4 || b == 4) ? 24.0 : (a == 2 && b == 2 ? 8.0 : 0.0);
      bilap_err = std::max(bilap_err, max_over_defined(bilaplacian(f), [&](double, double, double v) { return v - d4; }));
    }
  }
  const ScalarField2D r4 = ScalarField2D::rectangle(g, [](double x, double y) { return std::pow(x * x + y * y, 2); });
  bilap_err = std::max(bilap_err, max_over_defined(bilaplacian(r4), [](double, double, double v) { return v - 64.0; }));
  c.metric("laplacian_exactness", lap_err);
  c.metric("bilaplacian_exactness", bilap_err);
  c.require(lap_err <= 1e-10, "laplacian on cubics off by " + num(lap_err));
  c.require(bilap_err <= 1e-10, "bilaplacian on quartics off by " + num(bilap_err));

  // observed order on analytic fields, h = 1/64, 1/128, 1/256 on [0, 1]^2; truncation must stay
  // above the roundoff floor of the bilaplacian, about 64 eps_mach |f| / h^4
  struct Case {
    const char* name;
    double (*f)(double, double);
    double (*lap)(double, double);
    double (*bilap)(double, double);
  };
  const Case cases[] = {
      {"sin3x sin2y", [](double x, double y) { return std::sin(3 * x) * std::sin(2 * y); },
       [](double x, double y) { return -13 * std::sin(3 * x) * std::sin(2 * y); },
       [](double x, double y) { return 169 * std::sin(3 * x) * std::sin(2 * y); }},
      {"cos(4x-2y)", [](double x, double y) { return std::cos(4 * x - 2 * y); },
       [](double x, double y) { return -20 * std::cos(4 * x - 2 * y); },
       [](double x, double y) { return 400 * std::cos(4 * x - 2 * y); }},
  };
  double lo = 1e300, hi = -1e300;
  for (const Case& k : cases) {
    std::vector<double> hs, el, eb;
    for (int n : {65, 129, 257}) {
      const ScalarField2D f = ScalarField2D::rectangle(Grid2D::square(n, 0, 1), k.f);
      hs.push_back(f.grid().h);
      el.push_back(max_over_defined(laplacian(f), [&](double x, double y, double v) { return v - k.lap(x, y); }));
      eb.push_back(max_over_defined(bilaplacian(f), [&](double x, double y, double v) { return v - k.bilap(x, y); }));
    }
    for (const auto* e : {&el, &eb}) {
      for (std::size_t s = 0; s + 1 < e->size(); ++s) {
        const double order = std::log2((*e)[s] / (*e)[s + 1]);
        lo = std::min(lo, order);
        hi = std::max(hi, order);
      }
    }
  }
  c.metric("order_min", lo);
  c.metric("order_max", hi);
  c.require(lo >= 1.7 && hi <= 2.3, "observed orders in [" + num(lo) + ", " + num(hi) + "]");
  c.note("exactness " + num(std::max(lap_err, bilap_err)) + ", orders [" + num(lo) + ", " + num(hi) + "]");
}

void solver_cross_validation(const RunConfig& cfg, Check& c) {
  const NavierProblem p = make_problem(cfg, cfg.solver.n);
  const SolveResult newton = solve_navier(p);
  const SolveResult descent = minimize_energy(p, default_initial_guess(p));
  const double h = p.boundary_data.grid().h;
  const double diff = max_abs_diff(newton.u, descent.u);
  bool monotone = true;
  for (std::size_t k = 1; k < descent.report.trace.size(); ++k)
    monotone = monotone && descent.report.trace[k].energy <= descent.report.trace[k - 1].energy;
  c.metric("max_diff", diff);
  c.metric("ten_h2", 10 * h * h);
  c.metric("newton_residual", newton.report.final_residual);
  c.metric("newton_iterations", newton.report.iterations);
  c.metric("descent_iterations", descent.report.iterations);
  c.require(newton.report.converged && newton.report.final_residual <= 1e-8,
            "Newton residual " + num(newton.report.final_residual));
  c.require(diff <= 10 * h * h, "Newton vs descent " + num(diff) + " > 10h^2");
  c.require(monotone, "descent energy trace increases");
  c.note("diff " + num(diff) + " (10h^2 = " + num(10 * h * h) + "), residual " + num(newton.report.final_residual));
}

void identity_check(const RunConfig& cfg, Check& c) {
  const int fields = cfg.identity.fields;
  std::vector<double> hs, res;
  double at_128 = std::numeric_limits<double>::quiet_NaN();
  for (int n : cfg.identity.grids) {
    const NavierProblem p = make_problem(cfg, n);
    const SolveResult s = solve_navier(p);
    const IdentitySuiteReport rep = identity_suite(s.u, p.eps, fields, cfg.run.seed);
    hs.push_back(s.u.grid().h);
    res.push_back(rep.max_residual);
    c.metric("max_residual_n" + std::to_string(n), rep.max_residual);
    if (n == 129) at_128 = rep.max_residual;
  }
  const double order = res.size() >= 2 ? fitted_order(hs, res) : std::numeric_limits<double>::quiet_NaN();
  c.metric("fitted_order", order);

  double trivial = 0.0;
  const Grid2D g = Grid2D::square(129, cfg.solver.lo, cfg.solver.hi);
  for (double k : {0.0, 0.5, 0.05, -0.25}) {
    trivial = std::max(trivial, identity_suite(ScalarField2D::rectangle(g, k), cfg.solver.eps, fields, cfg.run.seed)
                                    .max_residual);
  }
  c.metric("trivial_residual", trivial);
  c.require(at_128 <= 5e-2, "residual at h = 1/128 is " + num(at_128));
  c.require(order >= 1.0, "fitted order " + num(order));
  c.require(trivial <= 1e-12, "zero/constant residual " + num(trivial));
  c.note("h=1/128 residual " + num(at_128) + ", order " + num(order) + ", constants " + num(trivial));
}

// r^2 g(theta) with {g > 0} of angular measure 2 (pi - acos(0.3 / sqrt(1.25)))
double homogeneous(double x, double y) { return x * x - y * y + x * y + 0.3 * (x * x + y * y); }

void monotonicity_check_all(const RunConfig& cfg, Check& c) {
  const auto& m = cfg.monotonicity;
  const DissipationVariant variant = dissipation_variant(m.variant);
  const std::vector<double> radii = geometric_radii(m.r_min, m.r_max, m.radii);
  std::vector<double> defects;
  bool monotone = true;
  double at_128 = std::numeric_limits<double>::quiet_NaN();
  for (int n : m.grids) {
    const NavierProblem p = make_problem(cfg, n);
    const SolveResult s = solve_navier(p);
    const Point2 center = free_boundary_center(s.u, cfg);
    const WeissContext ctx(s.u, p.eps, BumpProfile::standard(), m.n_theta);
    const WeissReport rep = monotonicity_check(ctx, center, radii, variant, m.tol_factor);
    double worst = 0.0;
    for (double d : rep.identity_defect) worst = std::max(worst, d);
    defects.push_back(worst);
    monotone = monotone && rep.monotone;
    c.metric("defect_n" + std::to_string(n), worst);
    if (n == 129) at_128 = worst;
  }
  c.require(monotone, "E not nondecreasing on some grid");
  c.require(at_128 <= 1e-2, "|dE - dissipation| at h = 1/128 is " + num(at_128));
  c.require(strictly_decreasing(defects), "defect not decreasing under refinement");

  // degree-2 homogeneous field, h = 1/128 on [-1, 1]^2
  const ScalarField2D u = ScalarField2D::rectangle(Grid2D::square(257, -1, 1), homogeneous);
  const WeissReport hom = monotonicity_check(u, 1e-6, {0, 0}, geometric_radii(0.15, 0.6, 5));
  const double exact = 2 * (kPi - std::acos(0.3 / std::sqrt(1.25))) / 8;
  double diss = 0.0, spread = 0.0;
  for (double d : hom.dissipation) diss = std::max(diss, std::abs(d));
  for (const WeissEnergy& e : hom.energies) spread = std::max(spread, std::abs(e.E - exact));
  c.metric("homogeneous_dissipation", diss);
  c.metric("homogeneous_energy_error", spread);
  c.require(diss <= 1e-8, "homogeneous dissipation " + num(diss));
  // O(h / r) cut-cell error in E
  c.require(spread <= 1e-3, "homogeneous E deviates by " + num(spread));
  c.note("defects " + num(defects.front()) + " -> " + num(defects.back()) + ", homogeneous diss " + num(diss) +
         ", E err " + num(spread));
}

void detachment_check(const RunConfig& cfg, Check& c) {
  const ScalarBump psi = standard_detachment_bump();
  double admissible = 0.0;
  for (auto [a, g] : {std::pair{1.0, 1.0}, std::pair{-1.0, -1.0}, std::pair{std::sqrt(2.0), -1.0}})
    admissible = std::max(admissible, std::abs(detachment_identity_residual(a, g, psi)));
  const double forbidden = std::abs(detachment_identity_residual(-1.0, 0.0, psi));

  // magnitudes in [0.25, 2], at least 0.1 away from both admissible sets
  std::mt19937_64 rng(cfg.run.seed);
  std::uniform_real_distribution<double> mag(0.25, 2.0);
  std::bernoulli_distribution sign(0.5);
  double weakest = std::numeric_limits<double>::infinity();
  int drawn = 0;
  while (drawn < 20) {
    const double a = (sign(rng) ? 1 : -1) * mag(rng), g = (sign(rng) ? 1 : -1) * mag(rng);
    const bool same = (a > 0) == (g > 0);
    if (same && std::abs(a - g) < 0.1) continue;
    if (!same && std::abs(std::abs(a * a - g * g) - 1.0) < 0.1) continue;
    weakest = std::min(weakest, std::abs(detachment_identity_residual(a, g, psi)));
    ++drawn;
  }

  double fit_err = 0.0;
  for (double angle : {kPi / 6, 1.3, 2.2}) {
    const double cx = std::cos(angle), cy = std::sin(angle), a = 0.6, g = -0.8;
    const ScalarField2D f = ScalarField2D::rectangle(Grid2D::square(129, -1, 1), [&](double x, double y) {
      const double s = cx * x + cy * y;
      return s > 0 ? a * s * s / 2 : g * s * s / 2;
    });
    const DetachmentFit fit = fit_quadratic_detachment(f, {0, 0}, 0.8);
    fit_err = std::max({fit_err, std::abs(fit.alpha - a), std::abs(fit.gamma - g)});
  }
  c.metric("admissible_residual", admissible);
  c.metric("forbidden_residual", forbidden);
  c.metric("weakest_inadmissible", weakest);
  c.metric("fit_error", fit_err);
  c.require(admissible <= 1e-6, "admissible residual " + num(admissible));
  c.require(forbidden >= 1e-2, "(-1, 0) residual " + num(forbidden));
  c.require(weakest >= 1e-2, "inadmissible residual " + num(weakest));
  c.require(fit_err <= 1e-6, "rotated fit error " + num(fit_err));
  c.note("admissible " + num(admissible) + ", min inadmissible " + num(weakest) + ", fit " + num(fit_err));
}

void game_check(const RunConfig& cfg, Check& c) {
  const auto& mc = cfg.montecarlo;
  const Grid2D g = Grid2D::square(mc.n, 0, 1);
  auto make = [&](double (*prize)(double, double), double penalty) {
    GameConfig gc(ScalarField2D::rectangle(g, prize), ScalarField2D::rectangle(g, penalty));
    gc.samples = mc.samples;
    gc.t_max = mc.t_max;
    gc.dimension = mc.dimension;
    gc.eps = mc.eps;
    gc.seed = cfg.run.seed;
    return gc;
  };
  const GameReport harmonic = validate_game_vs_pde(make([](double x, double y) { return x * y; }, 0.0),
                                                   default_probes(g));
  const GameReport penalty = validate_game_vs_pde(
      make([](double x, double y) { return x * x + y * y; }, mc.penalty), default_probes(g));

  const NavierProblem p = make_problem(cfg, 33);
  GameConfig coupled(p.boundary_data, p.boundary_data.with_values([](double, double) { return 0.0; }));
  coupled.eps = p.eps;
  const CoupledSolution cs = coupled_stationary_solve(coupled);
  const double diff = max_abs_diff(cs.u, solve_navier(p).u);

  c.metric("harmonic_within_3se", harmonic.within_3se);
  c.metric("penalty_within_3se", penalty.within_3se);
  c.metric("censored_fraction", std::max(harmonic.censored_fraction, penalty.censored_fraction));
  c.metric("coupled_diff", diff);
  c.require(harmonic.within_3se >= 8, "harmonic probes within 3 SE: " + std::to_string(harmonic.within_3se));
  c.require(penalty.within_3se >= 8, "penalty probes within 3 SE: " + std::to_string(penalty.within_3se));
  c.require(diff <= 1e-10, "coupled vs Navier " + num(diff));
  c.note("within 3 SE " + std::to_string(harmonic.within_3se) + "/10 and " + std::to_string(penalty.within_3se) +
         "/10, coupled diff " + num(diff));
}

void sweep_check(const RunConfig& cfg, Check& c) {
  NavierProblem tmpl = make_problem(cfg, cfg.sweep.n);
  const ConvergenceReport rep = eps_sweep(tmpl, cfg.sweep.eps);
  std::vector<double> sup, lap, area;
  bool all_ok = true;
  for (const SweepRow& r : rep.rows) {
    all_ok = all_ok && r.ok;
    if (!std::isnan(r.sup_diff)) sup.push_back(r.sup_diff);
    if (!std::isnan(r.lap_l2_diff)) lap.push_back(r.lap_l2_diff);
    area.push_back(r.transition_area);
  }
  // 0 <= J - J_eps <= |{0 < u <= eps}| on the swept fields and on analytic ones
  std::vector<std::pair<ScalarField2D, double>> tests;
  for (std::size_t k = 0; k < rep.rows.size(); ++k)
    if (rep.rows[k].ok) tests.emplace_back(rep.fields[k], rep.rows[k].eps);
  const Grid2D g = Grid2D::square(65, -1, 1);
  tests.emplace_back(ScalarField2D::rectangle(g, [](double x, double y) { return x * x + y * y - 0.3; }), 0.1);
  tests.emplace_back(ScalarField2D::rectangle(g, [](double x, double y) { return 0.2 * std::sin(4 * x) * y; }), 0.05);
  tests.emplace_back(ScalarField2D::rectangle(g, [](double x, double) { return x; }), 0.5);
  tests.emplace_back(ScalarField2D::rectangle(g, -1.0), 0.1);
  double worst_low = 0.0, worst_high = 0.0;
  for (const auto& [u, eps] : tests) {
    const double gap = energy_limit(u) - energy(u, eps);
    const double t = transition_measure(u, eps);
    worst_low = std::min(worst_low, gap);
    worst_high = std::max(worst_high, gap - t);
  }
  c.metric("energy_gap_below_zero", worst_low);
  c.metric("energy_gap_above_transition", worst_high);
  for (std::size_t k = 0; k < sup.size(); ++k) c.metric("sup_diff_" + std::to_string(k), sup[k]);
  for (std::size_t k = 0; k < lap.size(); ++k) c.metric("lap_l2_diff_" + std::to_string(k), lap[k]);
  c.require(all_ok, "a sweep solve failed");
  c.require(sup.size() + 1 == rep.rows.size() && strictly_decreasing(sup), "sup differences not decreasing");
  c.require(lap.size() + 1 == rep.rows.size() && strictly_decreasing(lap), "Laplacian L2 differences not decreasing");
  c.require(strictly_decreasing(area), "transition measure not decreasing in eps");
  // same cell quadrature on both sides, rounding only
  c.require(worst_low >= -1e-12 && worst_high <= 1e-12,
            "J - J_eps bound off by " + num(std::min(worst_low, -worst_high)));
  c.note("sup " + num(sup.front()) + " -> " + num(sup.back()) + ", lap " + num(lap.front()) + " -> " +
         num(lap.back()) + ", bound slack " + num(std::max(-worst_low, worst_high)));
}

void decay_check(const RunConfig& cfg, Check& c) {
  const NavierProblem p = make_problem(cfg, cfg.solver.n);
  const SolveResult s = solve_navier(p);
  const auto& d = cfg.decay;
  std::vector<double> fitted, fitted_signed;
  for (double div : d.divisors) {
    const DecayReport r = decay_estimate_check(s.u, p.eps, {d.x0, d.y0}, d.r0 / div, d.r0);
    fitted.push_back(r.fitted_C);
    fitted_signed.push_back(r.fitted_C_signed);
    c.metric("fitted_C_R0/" + num(div), r.fitted_C);
    c.metric("fitted_C_signed_R0/" + num(div), r.fitted_C_signed);
  }
  const auto [lo, hi] = std::minmax_element(fitted.begin(), fitted.end());
  const double ratio = *lo > 0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  const auto [slo, shi] = std::minmax_element(fitted_signed.begin(), fitted_signed.end());
  const double signed_ratio = *slo > 0 ? *shi / *slo : std::numeric_limits<double>::infinity();
  c.metric("ratio", ratio);
  c.metric("signed_ratio", signed_ratio);
  c.require(std::isfinite(ratio) && ratio <= 4.0, "fitted C varies by x" + num(ratio));
  c.note("C ratio " + num(ratio) + " (sign-corrected " + num(signed_ratio) + ")");
}

}  // namespace

NavierProblem make_problem(const RunConfig& cfg, int n) {
  const auto& s = cfg.solver;
  SolverTolerances tol;
  tol.residual_tol = s.residual_tol;
  tol.max_iter = s.max_iter;
  if (s.boundary == "quadratic") {
    NavierProblem p = quadratic_benchmark(n, s.eps, s.offset, s.lo, s.hi);
    p.tol = tol;
    p.validate();
    return p;
  }
  if (s.boundary == "constant") {
    NavierProblem p(ScalarField2D::rectangle(Grid2D::square(n, s.lo, s.hi), s.boundary_value), s.eps, tol);
    p.validate();
    return p;
  }
  throw ParameterError("solver.boundary must be quadratic or constant, got " + s.boundary);
}

Point2 free_boundary_center(const ScalarField2D& u, const RunConfig& cfg) {
  const double t = cfg.solver.lo + 0.7071 * (cfg.solver.hi - cfg.solver.lo);
  return detect_free_boundary_point(u, cfg.monotonicity.margin, {t, t});
}

DissipationVariant dissipation_variant(const std::string& name) {
  if (name == "derivation") return DissipationVariant::derivation;
  if (name == "printed") return DissipationVariant::printed;
  throw ParameterError("monotonicity.variant must be derivation or printed, got " + name);
}

std::string criterion_name(int id) {
  switch (id) {
    case 1: return "first counterexample: probe value, ODE, forcing mass";
    case 2: return "second counterexample: slope k, sup bound, left zero";
    case 3: return "stencil exactness and order";
    case 4: return "Newton vs energy descent";
    case 5: return "integral identity suite";
    case 6: return "Weiss monotonicity";
    case 7: return "quadratic detachment";
    case 8: return "random walk game vs PDE";
    case 9: return "epsilon sweep trends";
    case 10: return "decay constant boundedness";
    default: throw ParameterError("no criterion " + std::to_string(id));
  }
}

namespace {

double time_limit(int id) {
  constexpr double limits[] = {1, 5, 10, 60, 120, 120, 10, 120, 600, 30};
  return limits[id - 1];
}

}  // namespace

CriterionResult run_criterion(int id, const RunConfig& cfg) {
  CriterionResult r;
  r.id = id;
  r.name = criterion_name(id);
  r.time_limit = time_limit(id);
  r.pass = true;
  Check c{r, {}};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: counterexample_one(cfg, c); break;
      case 2: counterexample_two(cfg, c); break;
      case 3: stencil_suite(c); break;
      case 4: solver_cross_validation(cfg, c); break;
      case 5: identity_check(cfg, c); break;
      case 6: monotonicity_check_all(cfg, c); break;
      case 7: detachment_check(cfg, c); break;
      case 8: game_check(cfg, c); break;
      case 9: sweep_check(cfg, c); break;
      case 10: decay_check(cfg, c); break;
    }
  } catch (const Error& e) {
    c.require(false, std::string(e.kind()) + " error: " + e.what());
  } catch (const std::exception& e) {
    c.require(false, std::string("error: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(r.seconds < r.time_limit, "runtime " + num(r.seconds) + " s over " + num(r.time_limit) + " s");
  r.detail = c.text.str();
  return r;
}

std::vector<CriterionResult> run_acceptance(const RunConfig& cfg,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    out.push_back(run_criterion(id, cfg));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << std::fixed << r.seconds
     << " s): " << r.detail;
  return os.str();
}

}  // namespace fblab::app
