#include "fblab/forcing.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "fblab/errors.hpp"

namespace fblab {
namespace {

double raw_bump(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(-1.0 / (t * (1.0 - t)));
}

double integrate(double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(raw_bump, a, b, 8, 1e-14);
}

// Table cells are short enough for a fixed rule to reach roundoff.
double integrate_cell(double a, double b) {
  using boost::math::quadrature::gauss;
  return gauss<double, 20>::integrate(raw_bump, a, b);
}

void check_eps(double eps) {
  if (!(eps > 0.0) || eps > 1.0) {
    std::ostringstream msg;
    msg << "epsilon must lie in (0, 1], got " << eps;
    throw ParameterError(msg.str());
  }
}

}  // namespace

BumpProfile::BumpProfile() {
  const double mass = integrate(0.0, 1.0);
  c_ = 1.0 / mass;
  peak_ = c_ * std::exp(-4.0);

  const int n = kTableSize;
  const double dt = 1.0 / (n - 1);
  table_.assign(n, 0.0);
  slopes_.assign(n, 0.0);
  double acc = 0.0;
  for (int k = 1; k < n; ++k) {
    acc += c_ * integrate_cell((k - 1) * dt, k * dt);
    table_[k] = acc;
  }
  if (std::abs(table_.back() - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "bump normalization failed: table mass " << table_.back();
    throw SolverError(msg.str());
  }
  table_.back() = 1.0;
  for (int k = 0; k < n; ++k) slopes_[k] = beta(k * dt);
  // Fritsch-Carlson limiter keeps the Hermite interpolant monotone.
  for (int k = 0; k + 1 < n; ++k) {
    const double secant = (table_[k + 1] - table_[k]) / dt;
    if (secant <= 0.0) {
      slopes_[k] = slopes_[k + 1] = 0.0;
      continue;
    }
    const double a = slopes_[k] / secant;
    const double b = slopes_[k + 1] / secant;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      slopes_[k] = tau * a * secant;
      slopes_[k + 1] = tau * b * secant;
    }
  }
}

const BumpProfile& BumpProfile::standard() {
  static const BumpProfile instance;
  return instance;
}

double BumpProfile::beta(double t) const { return c_ * raw_bump(t); }

double BumpProfile::beta_prime(double t) const {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double q = t * (1.0 - t);
  return beta(t) * (1.0 - 2.0 * t) / (q * q);
}

double BumpProfile::primitive(double t) const {
  if (std::isnan(t)) return t;
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const int n = kTableSize;
  const double dt = 1.0 / (n - 1);
  int k = static_cast<int>(t / dt);
  if (k >= n - 1) k = n - 2;
  const double s = (t - k * dt) / dt;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double v = h00 * table_[k] + h10 * dt * slopes_[k] + h01 * table_[k + 1] + h11 * dt * slopes_[k + 1];
  return std::clamp(v, 0.0, 1.0);
}

double BumpProfile::beta_eps(double t, double eps) const {
  check_eps(eps);
  return beta(t / eps) / eps;
}

double BumpProfile::beta_eps_prime(double t, double eps) const {
  check_eps(eps);
  return beta_prime(t / eps) / (eps * eps);
}

double BumpProfile::big_beta_eps(double v, double eps) const {
  check_eps(eps);
  if (v <= 0.0) return 0.0;
  if (v > eps) return 1.0;
  return primitive(v / eps);
}

}  // namespace fblab
