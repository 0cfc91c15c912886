#include "fblab/counterexamples.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "fblab/errors.hpp"
#include "fblab/forcing.hpp"

namespace fblab {
namespace {

constexpr int kBumpTerms = 64;

double integrate(const auto& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  if (!(b > a)) return 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-13);
}

// Bracketed root of an increasing function.
double solve_increasing(const auto& f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

// Positive root of s^3 - 11 s^2 + 135 s - 45; the cubic is increasing.
double bracket_root() {
  static const double root =
      solve_increasing([](double s) { return ((s - 11.0) * s + 135.0) * s - 45.0; }, 0.0, 1.0);
  return root;
}

double max_eps() { return std::exp(-2.0) - std::exp(-3.0); }

double minorant(double x) { return x > 0.0 ? std::exp(-1.0 / x - x) : 0.0; }

double unit_bump(double y) {
  if (y <= -1.0 || y >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

}  // namespace

std::array<double, 5> contr_u(double x, double eps) {
  if (!(eps > 0.0)) throw ParameterError("epsilon must be positive");
  if (x <= 0.0) return {0.0, 0.0, 0.0, 0.0, 0.0};
  const double x2 = x * x, x4 = x2 * x2, x8 = x4 * x4;
  const double q = eps + x4;
  const double L = std::log(q);
  return {
      -x2 * L,
      -2.0 * x * L - 4.0 * x4 * x / q,
      -2.0 * L - 4.0 * x4 * (7.0 * eps + 3.0 * x4) / (q * q),
      -8.0 * x2 * x * (15.0 * eps * eps + x8) / (q * q * q),
      8.0 * x2 * (x8 * x4 - 11.0 * eps * x8 + 135.0 * eps * eps * x4 - 45.0 * eps * eps * eps) / (q * q * q * q),
  };
}

double contr_probe_reference(double eps) { return 10.0 + 2.0 * std::log(2.0 * eps); }

ContrFamily::ContrFamily(double eps) : eps_(eps) {
  if (!(eps > 0.0) || eps > max_eps()) {
    std::ostringstream msg;
    msg << "logarithmic family needs 0 < eps <= e^-2 - e^-3, got " << eps;
    throw ParameterError(msg.str());
  }
  const double s0 = bracket_root();
  auto formula_density = [&](double x) {
    const auto d = u(x);
    return -2.0 * d[4] * d[1];
  };
  iota_ = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(eps / 4.0))));
  for (int attempt = 0; attempt < 200; ++attempt, iota_ *= 0.5) {
    const double z2 = zeta(2.0 * iota_);
    if (!(z2 * z2 * z2 * z2 < s0 * eps)) continue;
    branch_end_ = zeta(iota_);
    blend_end_ = z2;
    formula_mass_ = integrate(formula_density, 0.0, branch_end_);
    blend_mass_ = integrate(
        [&](double x) { return formula_density(x) * (1.0 - smooth_step((u(x)[0] - iota_) / iota_)); }, branch_end_,
        blend_end_);
    bump_mass_ = 1.0 - formula_mass_ - blend_mass_;
    if (bump_mass_ > 0.0) return;
  }
  throw ParameterError("no admissible threshold iota found for this epsilon");
}

double ContrFamily::zeta(double t) const {
  const double x_max = std::exp(-0.75);
  const double t_max = contr_u(x_max, eps_)[0];
  if (!(t >= 0.0) || !(t < t_max)) {
    std::ostringstream msg;
    msg << "zeta needs t in [0, " << t_max << "), got " << t;
    throw DomainError(msg.str());
  }
  if (t == 0.0) return 0.0;
  return solve_increasing([&](double x) { return contr_u(x, eps_)[0] - t; }, 0.0, x_max);
}

double ContrFamily::beta_formula(double t) const {
  const double z = zeta(t);
  const double z4 = z * z * z * z, e = eps_;
  const double q = z4 + e;
  return -16.0 * z * z * (z4 * z4 * z4 - 11.0 * e * z4 * z4 + 135.0 * e * e * z4 - 45.0 * e * e * e) / (q * q * q * q);
}

double ContrFamily::beta(double t) const {
  if (t <= 0.0 || t >= eps_) return 0.0;
  if (t <= iota_) return beta_formula(t);
  if (t < 2.0 * iota_) return beta_formula(t) * (1.0 - smooth_step((t - iota_) / iota_));
  const double width = eps_ - 2.0 * iota_;
  return bump_mass_ * BumpProfile::standard().beta((t - 2.0 * iota_) / width) / width;
}

ContrBlowupReport contr_blowup_report(const std::vector<double>& eps_list) {
  ContrBlowupReport rep;
  const double delta = 0.5 * std::exp(-0.75);
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw ParameterError("epsilon must be positive");
    ContrBlowupRow row;
    row.eps = eps;
    row.delta = delta;
    // u'' -> -2 log eps as x -> 0+; the left half contributes 0.
    double best = std::abs(2.0 * std::log(eps));
    const int n = 4000;
    for (int k = 0; k < n; ++k) {
      const double x = delta * std::pow(1e-12, 1.0 - static_cast<double>(k) / n);
      best = std::max(best, std::abs(contr_u(x, eps)[2]));
    }
    row.max_abs_u2 = best;
    row.probe_x = std::pow(eps, 0.25);
    row.probe_u2 = contr_u(row.probe_x, eps)[2];
    row.reference = contr_probe_reference(eps);
    row.probe_defect = std::abs(std::abs(row.probe_u2) - std::abs(row.reference)) / std::abs(row.reference);
    rep.rows.push_back(row);
  }
  rep.increasing = rep.rows.size() >= 2;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    if (!(rep.rows[k].max_abs_u2 > rep.rows[k - 1].max_abs_u2)) rep.increasing = false;
  }
  return rep;
}

double ExampleProfile::bump_width(int j) { return std::ldexp(1.0, -j) / (4.0 * j * j); }

ExampleProfile::ExampleProfile() {
  bump_mass_ = integrate(unit_bump, -1.0, 1.0);
  minorant_mass_ = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      minorant, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
  double sq = 0.0, sm = 0.0;
  for (int j = 1; j <= kBumpTerms; ++j) {
    sq += static_cast<double>(j) * j * bump_width(j);
    sm += minorant(j) * bump_width(j);
  }
  s_ = (1.0 - bump_mass_ * sq) / (minorant_mass_ - bump_mass_ * sm);
  if (!(s_ > 0.0)) throw SolverError("profile mass budget is negative");
}

const ExampleProfile& ExampleProfile::standard() {
  static const ExampleProfile instance;
  return instance;
}

std::array<double, 4> ExampleProfile::phi(double x) const {
  std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
  if (x <= 0.0) return out;
  {
    const double e = s_ * minorant(x);
    const double ix = 1.0 / x;
    const double g1 = ix * ix - 1.0, g2 = -2.0 * ix * ix * ix, g3 = 6.0 * ix * ix * ix * ix;
    out = {e, g1 * e, (g2 + g1 * g1) * e, (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * e};
  }
  const double jr = std::round(x);
  if (jr < 1.0 || jr > kBumpTerms) return out;
  const int j = static_cast<int>(jr);
  const double w = bump_width(j);
  const double y = (x - j) / w;
  if (std::abs(y) >= 1.0) return out;
  const double c = static_cast<double>(j) * j - s_ * minorant(j);
  const double q = 1.0 - y * y;
  const double b = unit_bump(y);
  const double g1 = -2.0 * y / (q * q);
  const double g2 = -2.0 / (q * q) - 8.0 * y * y / (q * q * q);
  const double g3 = -24.0 * y / (q * q * q) - 48.0 * y * y * y / (q * q * q * q);
  out[0] += c * b;
  out[1] += c * g1 * b / w;
  out[2] += c * (g2 + g1 * g1) * b / (w * w);
  out[3] += c * (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * b / (w * w * w);
  return out;
}

double ExampleProfile::u(double x) const {
  if (x <= 0.0) return 0.0;
  double acc = s_ * integrate(minorant, 0.0, std::min(x, 60.0));
  for (int j = 1; j <= kBumpTerms; ++j) {
    const double w = bump_width(j);
    const double y = (x - j) / w;
    if (y <= -1.0) break;
    const double c = static_cast<double>(j) * j - s_ * minorant(j);
    const double part = y >= 1.0 ? bump_mass_ : integrate(unit_bump, -1.0, y);
    acc += c * w * part;
  }
  return acc;
}

double ExampleProfile::v(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) throw DomainError("inverse profile is defined on [0, 1)");
  double hi = 1.0;
  while (u(hi) <= t) {
    hi *= 2.0;
    if (hi > 64.0) throw DomainError("value too close to 1 for the inverse profile");
  }
  return solve_increasing([&](double x) { return u(x) - t; }, 0.0, hi);
}

double ExampleProfile::beta(double t) const {
  if (t < 0.0 || t >= 1.0) return 0.0;
  return -2.0 * phi(v(t))[3];
}

ExampleValue example_u(double x, int k) {
  if (k < 1) throw ParameterError("k must be >= 1");
  const ExampleProfile& p = ExampleProfile::standard();
  const double kk = k;
  return {p.u(kk * x) / (kk * kk), p.phi(kk * x)[0] / kk};
}

double example_u4(double x, int k) {
  if (k < 1) throw ParameterError("k must be >= 1");
  const double kk = k;
  return kk * kk * ExampleProfile::standard().phi(kk * x)[3];
}

double example_beta(double t, int k) {
  if (k < 1) throw ParameterError("k must be >= 1");
  const double kk = k;
  return kk * kk * ExampleProfile::standard().beta(kk * kk * t);
}

}  // namespace fblab
