#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fblab/diagnostics.hpp"
#include "fblab/errors.hpp"

using namespace fblab;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScalarField2D on_square(int n, double lo, double hi, double (*f)(double, double)) {
  return ScalarField2D::rectangle(Grid2D::square(n, lo, hi), f);
}

// h = 1/64; R = 12h and 4R = 48h so (0, +-4R) are nodes
constexpr int kN = 129;
constexpr double kR = 0.1875;
constexpr double kR0 = 0.9;

}  // namespace

TEST(W2p, ConstantShiftCountsOnlyValues) {
  const int n = 33;
  const auto a = on_square(n, 0, 1, [](double x, double y) { return std::sin(x) * y; });
  const auto b = a.with_values([](double x, double y) { return std::sin(x) * y - 0.25; });
  const double h = 1.0 / (n - 1);
  const double area = h * h * (n - 2) * (n - 2);
  EXPECT_NEAR(w2p_distance(a, b, 2.0), 0.25 * std::sqrt(area), 1e-13);
  EXPECT_NEAR(w2p_distance(a, b, 4.0), 0.25 * std::pow(area, 0.25), 1e-13);
  EXPECT_EQ(w2p_distance(a, a, 2.0), 0.0);
  EXPECT_THROW(w2p_distance(a, b, 0.5), ParameterError);
}

TEST(W2p, QuadraticDifferenceByDirectSum) {
  const int n = 33;
  const auto a = on_square(n, 0, 1, [](double x, double) { return x * x; });
  const auto b = on_square(n, 0, 1, [](double, double) { return 0.0; });
  const double h = 1.0 / (n - 1);
  double acc = 0.0;
  for (int j = 1; j < n - 1; ++j)
    for (int i = 1; i < n - 1; ++i) {
      const double x = i * h;
      acc += x * x * x * x + 4 * x * x + 4;  // |d|^2 + |2x|^2 + |diag(2,0)|^2
    }
  EXPECT_NEAR(w2p_distance(a, b, 2.0), std::sqrt(acc * h * h), 1e-12);
}

TEST(W2p, GridMismatchRaises) {
  const auto a = on_square(17, 0, 1, [](double, double) { return 0.0; });
  const auto b = on_square(33, 0, 1, [](double, double) { return 0.0; });
  EXPECT_THROW(w2p_distance(a, b, 2.0), DimensionError);
  EXPECT_THROW(laplacian_l2_distance(a, b), DimensionError);
}

TEST(LaplacianL2, ConstantLaplacianGap) {
  const int n = 33;
  const auto a = on_square(n, 0, 1, [](double x, double y) { return x * x + y * y; });
  const auto b = on_square(n, 0, 1, [](double x, double y) { return x - 3 * y; });
  const double h = 1.0 / (n - 1);
  // Lap a - Lap b = 4 on the (n-2)^2 interior nodes
  EXPECT_NEAR(laplacian_l2_distance(a, b), 4 * h * (n - 2), 1e-11);
}

TEST(Bmo, LinearRampWholeSquareWins) {
  const auto f = on_square(17, 0, 1, [](double x, double) { return x; });
  // mean |i/16 - 1/2| over i = 0..16
  EXPECT_NEAR(bmo_seminorm(f), 4.5 / 17, 1e-14);
  EXPECT_EQ(bmo_seminorm(on_square(17, 0, 1, [](double, double) { return 3.0; })), 0.0);
}

TEST(Bmo, SkipsUndefinedEntries) {
  auto f = on_square(17, 0, 1, [](double, double) { return 1.0; });
  f(4, 4) = kNaN;
  EXPECT_EQ(bmo_seminorm(f), 0.0);
}

TEST(StrictlyDecreasing, Cases) {
  EXPECT_TRUE(strictly_decreasing({3, 2, 1}));
  EXPECT_TRUE(strictly_decreasing({kNaN, 3, kNaN, 1}));
  EXPECT_FALSE(strictly_decreasing({3, 3, 1}));
  EXPECT_FALSE(strictly_decreasing({1, 2}));
  EXPECT_FALSE(strictly_decreasing({kNaN, 1}));
  EXPECT_FALSE(strictly_decreasing({}));
}

TEST(Sweep, ZeroDataAndFailedRow) {
  const NavierProblem tmpl(on_square(17, 0, 1, [](double, double) { return 0.0; }), 0.1);
  const ConvergenceReport rep = eps_sweep(tmpl, {0.1, 1.5, 0.05});
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_TRUE(rep.rows[0].ok);
  EXPECT_FALSE(rep.rows[1].ok);
  EXPECT_FALSE(rep.rows[1].error.empty());
  EXPECT_TRUE(rep.rows[2].ok);
  EXPECT_TRUE(std::isnan(rep.rows[0].sup_diff));
  EXPECT_EQ(rep.rows[2].sup_diff, 0.0);
  EXPECT_EQ(rep.rows[2].lap_l2_diff, 0.0);
  for (int k : {0, 2}) {
    EXPECT_EQ(rep.rows[k].J_eps, 0.0);
    EXPECT_EQ(rep.rows[k].J_limit, 0.0);
  }
  EXPECT_EQ(rep.fields[1].grid().nx, 0);
}

TEST(Decay, ConstantFieldHasNoConstant) {
  const auto u = on_square(kN, -1, 1, [](double, double) { return 0.7; });
  const DecayReport r = decay_estimate_check(u, 0.05, {0, 0}, kR, kR0);
  EXPECT_EQ(r.fitted_C, 0.0);
  EXPECT_EQ(r.fitted_C_signed, 0.0);
  EXPECT_EQ(r.var_integral, 0.0);
}

TEST(Decay, SaddleOracle) {
  // lhs = 10 pi, var = 7 pi (4R)^6 / 6 over B_4R, c_hat = 0
  const auto u = on_square(kN, -1, 1, [](double x, double y) { return x * x - y * y; });
  const DecayReport r = decay_estimate_check(u, 0.05, {0, 0}, kR, kR0);
  EXPECT_NEAR(r.m, -16 * kR * kR, 1e-14);
  EXPECT_NEAR(r.lhs, 10 * std::numbers::pi, 1e-3 * 10 * std::numbers::pi);
  EXPECT_NEAR(r.c_hat, 0.0, 1e-12);
  EXPECT_NEAR(r.fitted_C, 60.0 / 28672, 1e-3 * 60.0 / 28672);
  EXPECT_NEAR(r.fitted_C_signed, r.fitted_C, 1e-12);
}

TEST(Decay, ParaboloidSignConvention) {
  // m = 0, var = pi (4R)^6 / 3, mean = pi (4R)^4 / 2, c_hat = 4
  const auto u = on_square(kN, -1, 1, [](double x, double y) { return x * x + y * y; });
  const DecayReport r = decay_estimate_check(u, 0.05, {0, 0}, kR, kR0);
  EXPECT_NEAR(r.c_hat, 4.0, 4e-3);
  EXPECT_EQ(r.fitted_C, 0.0);
  EXPECT_NEAR(r.fitted_C_signed, 1566.0 / 4096, 1e-3 * 1566.0 / 4096);
}

TEST(Decay, LinearOracle) {
  // lhs = pi / R^2, var = 5 pi (4R)^4 / 4
  const auto u = on_square(kN, -1, 1, [](double x, double) { return x; });
  const DecayReport r = decay_estimate_check(u, 0.05, {0, 0}, kR, kR0);
  EXPECT_NEAR(r.fitted_C, 1.0 / 320, 1e-3 / 320);
}

TEST(Decay, Validation) {
  const auto u = on_square(kN, -1, 1, [](double x, double) { return x; });
  EXPECT_THROW(decay_estimate_check(u, 0.05, {0, 0}, 0.25, 0.9), ParameterError);
  EXPECT_THROW(decay_estimate_check(u, 0.0, {0, 0}, kR, kR0), ParameterError);
  EXPECT_THROW(decay_estimate_check(u, 0.05, {0, 0}, -kR, kR0), ParameterError);
  EXPECT_THROW(decay_estimate_check(u, 0.05, {0.6, 0}, kR, kR0), GeometryError);
}
