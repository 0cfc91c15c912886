#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "fblab/errors.hpp"
#include "fblab/forcing.hpp"

using namespace fblab;

namespace {

// adaptive Simpson, written here as an oracle independent of the library's quadrature
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, 50);
}

const BumpProfile& bump() { return BumpProfile::standard(); }

}  // namespace

TEST(Beta, SupportEndpoints) {
  EXPECT_EQ(bump().beta(-0.3), 0.0);
  EXPECT_EQ(bump().beta(0.0), 0.0);
  EXPECT_EQ(bump().beta(1.0), 0.0);
  EXPECT_EQ(bump().beta(1.7), 0.0);
}

TEST(Beta, UnitMassAgainstSimpsonOracle) {
  const double mass = integrate([](double t) { return bump().beta(t); }, 0.0, 1.0);
  EXPECT_NEAR(mass, 1.0, 1e-10);
  EXPECT_NEAR(bump().beta(0.5), bump().normalization() * std::exp(-4.0), 1e-15);
}

TEST(Beta, NonnegativeAndSymmetric) {
  for (int k = 0; k <= 200; ++k) {
    const double t = k / 200.0;
    EXPECT_GE(bump().beta(t), 0.0);
    EXPECT_NEAR(bump().beta(t), bump().beta(1 - t), 1e-12);
  }
  EXPECT_NEAR(bump().peak(), bump().beta(0.5), 1e-14);
}

TEST(BetaEps, ScalingAndMass) {
  const double eps = 0.1;
  EXPECT_EQ(bump().beta_eps(2 * eps, eps), 0.0);
  EXPECT_NEAR(bump().beta_eps(eps / 2, eps), bump().beta(0.5) / eps, 1e-12);
  EXPECT_NEAR(integrate([eps](double t) { return bump().beta_eps(t, eps); }, 0.0, eps), 1.0, 1e-10);
  EXPECT_THROW(bump().beta_eps(0.1, 0.0), ParameterError);
  EXPECT_THROW(bump().beta_eps(0.1, -1.0), ParameterError);
}

TEST(BigBeta, PlateausAndMidpoint) {
  EXPECT_EQ(bump().big_beta_eps(5.0, 0.01), 1.0);
  EXPECT_EQ(bump().big_beta_eps(-1.0, 0.01), 0.0);
  EXPECT_EQ(bump().big_beta_eps(0.0, 0.01), 0.0);
  const double eps = 0.2;
  EXPECT_NEAR(bump().big_beta_eps(eps / 2, eps), 0.5, 1e-10);
  EXPECT_THROW(bump().big_beta_eps(0.1, 0.0), ParameterError);
}

TEST(BigBeta, MatchesQuadratureOfBeta) {
  for (double s : {0.1, 0.27, 0.5, 0.63, 0.9}) {
    const double oracle = integrate([](double t) { return bump().beta(t); }, 0.0, s);
    EXPECT_NEAR(bump().big_beta_eps(0.3 * s, 0.3), oracle, 1e-9) << s;
  }
}

TEST(BigBeta, BoundedAndMonotone) {
  double prev = -1.0;
  for (int k = -50; k <= 1300; ++k) {
    const double v = k * 1e-3;
    const double b = bump().big_beta_eps(v, 1.0);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 1.0);
    EXPECT_GE(b, prev);
    prev = b;
  }
}

TEST(BigBeta, DerivativeIsBetaEps) {
  const double eps = 0.05;
  const double dv = 1e-7 * eps;
  for (int k = 1; k < BumpProfile::kTableSize - 1; k += 37) {
    const double v = eps * k / (BumpProfile::kTableSize - 1);
    const double fd = (bump().big_beta_eps(v + dv, eps) - bump().big_beta_eps(v - dv, eps)) / (2 * dv);
    EXPECT_NEAR(fd, bump().beta_eps(v, eps), 1e-6 * (1 + bump().beta_eps(v, eps))) << v;
  }
}

TEST(Beta, FlatContactAtZero) {
  // forward differences of order 1..4 on nodes 0, d, ..., 4d, divided by d^k
  const double d = 1e-3;
  double f[5];
  for (int k = 0; k <= 4; ++k) f[k] = bump().beta(k * d);
  EXPECT_EQ(f[0], 0.0);
  const double q1 = (f[1] - f[0]) / d;
  const double q2 = (f[2] - 2 * f[1] + f[0]) / (d * d);
  const double q3 = (f[3] - 3 * f[2] + 3 * f[1] - f[0]) / std::pow(d, 3);
  const double q4 = (f[4] - 4 * f[3] + 6 * f[2] - 4 * f[1] + f[0]) / std::pow(d, 4);
  for (double q : {q1, q2, q3, q4}) EXPECT_LE(std::abs(q), 1e-60);
  EXPECT_EQ(bump().beta_prime(0.0), 0.0);
  EXPECT_LE(std::abs(bump().beta_prime(1e-3)), 1e-300);
}

TEST(Beta, DerivativeMatchesDifferences) {
  for (double t : {0.1, 0.3, 0.5, 0.77}) {
    const double d = 1e-6;
    EXPECT_NEAR(bump().beta_prime(t), (bump().beta(t + d) - bump().beta(t - d)) / (2 * d), 1e-6);
  }
}
