#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "fblab/errors.hpp"
#include "fblab/monotonicity.hpp"
#include "fblab/solver.hpp"

using namespace fblab;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField2D centered(double (*f)(double, double), int n = 129) {
  return ScalarField2D::rectangle(Grid2D::square(n, -1, 1), f);
}

double paraboloid(double x, double y) { return x * x + y * y; }
double saddle(double x, double y) { return x * x - y * y; }
// r^2 g(theta) with g = cos 2t + 0.5 sin 2t + 0.3
double homogeneous(double x, double y) { return x * x - y * y + x * y + 0.3 * (x * x + y * y); }
double cubic_mix(double x, double y) { return x * x * x - 0.5 * x * y + 0.2 * y * y + 0.1 * x; }

}  // namespace

TEST(Components, ZeroField) {
  const auto u = centered([](double, double) { return 0.0; }, 65);
  const WeissComponents c = weiss_components(u, 0.1, {0, 0}, 0.3);
  EXPECT_EQ(c.T, 0.0);
  EXPECT_EQ(c.D, 0.0);
  EXPECT_EQ(c.R, 0.0);
  EXPECT_EQ(c.V, 0.0);
  EXPECT_EQ(c.W, 0.0);
  const WeissEnergy e = weiss_energy(u, 0.1, {0, 0}, 0.3);
  EXPECT_EQ(e.E, 0.0);
  EXPECT_EQ(dissipation(u, {0, 0}, 0.1, 0.3), 0.0);
  EXPECT_EQ(dissipation(u, {0, 0}, 0.1, 0.3, DissipationVariant::printed), 0.0);
  EXPECT_EQ(limit_weiss_energy(u, {0, 0}, 0.3), 0.0);
  const WeissReport rep = monotonicity_check(u, 0.1, {0, 0}, geometric_radii(0.1, 0.4, 4));
  EXPECT_TRUE(rep.monotone);
  for (double d : rep.identity_defect) EXPECT_EQ(d, 0.0);
}

TEST(Components, ParaboloidClosedForms) {
  // Lap u = 4, u_r = 2r, u_rr = 2, u_theta = 0
  const auto u = centered(paraboloid);
  const double eps = 0.5;
  for (double r : {0.2, 0.35, 0.5}) {
    const WeissComponents c = weiss_components(u, eps, {0, 0}, r);
    const double big_b = gauss_kronrod<double, 31>::integrate(
        [eps](double s) { return BumpProfile::standard().big_beta_eps(s, eps); }, 0.0, r * r, 10, 1e-14);
    // disc terms carry the cut-cell area error of disc_integral; R's two parts cancel up to it
    const double area = disc_integral(ScalarField2D::rectangle(u.grid(), 1.0), {0, 0}, r);
    EXPECT_NEAR(area, kPi * r * r, 5e-4 * kPi * r * r) << r;
    EXPECT_NEAR(c.T, 16 * kPi, 1e-8) << r;
    EXPECT_NEAR(c.D, 16 * kPi + kPi * big_b / (r * r), 5e-4 * c.D) << r;
    EXPECT_NEAR(c.R, 16 * (area - kPi * r * r) / (r * r * r), 1e-8) << r;
    EXPECT_NEAR(c.V, 8 * kPi, 1e-8) << r;
    EXPECT_NEAR(c.W, 4 * kPi, 1e-8) << r;
    const WeissEnergy e = weiss_energy(u, eps, {0, 0}, r);
    EXPECT_NEAR(e.boundary, 8 * kPi - 8 * kPi - 4 * kPi, 1e-8) << r;
  }
}

TEST(Components, QuadraticScaling) {
  const auto u = centered(saddle);
  const auto u3 = u.with_values([](double x, double y) { return 3 * saddle(x, y) + 2 * paraboloid(x, y); });
  const auto v = u.with_values([](double x, double y) { return saddle(x, y) + 2.0 / 3 * paraboloid(x, y); });
  const double eps = 1.0, r = 0.3;
  const WeissContext cv(v, eps), cu3(u3, eps);
  const WeissComponents a = weiss_components(cv, {0, 0}, r), b = weiss_components(cu3, {0, 0}, r);
  EXPECT_NEAR(b.T, 9 * a.T, 1e-9 * std::abs(b.T));
  EXPECT_NEAR(b.R, 9 * a.R, 1e-3);
  EXPECT_NEAR(b.V, 9 * a.V, 1e-9 * std::abs(b.V));
  EXPECT_NEAR(cu3.lap_sq_integral({0, 0}, r), 9 * cv.lap_sq_integral({0, 0}, r),
              1e-12 * cu3.lap_sq_integral({0, 0}, r));
}

TEST(Dissipation, DegreeTwoHomogeneousNull) {
  const auto u = centered(homogeneous);
  EXPECT_LE(dissipation(u, {0, 0}, 0.1, 0.5), 1e-8);
  EXPECT_GT(dissipation(u, {0, 0}, 0.1, 0.5, DissipationVariant::printed), 1e-2);
}

// g = A cos(2t - p) + 0.3 with A = sqrt(1.25): |{g > 0}| / 8
double homogeneous_energy() {
  const double a = 0.3 / std::sqrt(1.25);
  return 2 * (kPi - std::acos(a)) / 8;
}

TEST(Dissipation, HomogeneousEnergyIsRadiusFree) {
  // the step in B_eps(u) is unresolved, so E carries an O(h / r) cut-cell error
  double prev_e = 1.0, prev_l = 1.0;
  for (int n : {129, 257}) {
    const auto u = centered(homogeneous, n);
    const WeissReport rep = monotonicity_check(u, 1e-6, {0, 0}, geometric_radii(0.15, 0.6, 5));
    ASSERT_EQ(rep.dE.size(), 4u);
    double err = 0.0, lerr = 0.0;
    for (std::size_t k = 0; k < rep.dE.size(); ++k) {
      EXPECT_LE(rep.dissipation[k], 1e-8);
      EXPECT_GT(rep.dissipation_other_variant[k], 0.0);
      err = std::max(err, std::abs(rep.dE[k]));
    }
    for (const auto& e : rep.energies) err = std::max(err, std::abs(e.E - homogeneous_energy()));
    for (double r : {0.15, 0.25, 0.4, 0.55})
      lerr = std::max(lerr, std::abs(limit_weiss_energy(u, {0, 0}, r) - homogeneous_energy()));
    EXPECT_LT(err, prev_e) << n;
    EXPECT_LT(lerr, prev_l) << n;
    prev_e = err;
    prev_l = lerr;
  }
  EXPECT_LE(prev_e, 1e-3);
  EXPECT_LE(prev_l, 1e-3);
}

TEST(Dissipation, ScalesQuadratically) {
  const auto u = centered(cubic_mix);
  const auto u2 = u.with_values([](double x, double y) { return 2 * cubic_mix(x, y); });
  for (auto v : {DissipationVariant::derivation, DissipationVariant::printed}) {
    const double d1 = dissipation(u, {0.1, -0.05}, 0.1, 0.4, v);
    const double d2 = dissipation(u2, {0.1, -0.05}, 0.1, 0.4, v);
    EXPECT_GT(d1, 0.0);
    EXPECT_NEAR(d2, 4 * d1, 1e-12 * d2);
  }
  EXPECT_THROW(dissipation(u, {0, 0}, 0.3, 0.3), ParameterError);
}

TEST(LimitEnergy, NegativeConstant) {
  const double c = 0.3;
  const auto u = centered([](double, double) { return -0.3; });
  for (double r : {0.2, 0.45}) {
    EXPECT_NEAR(limit_weiss_energy(u, {0, 0}, r), -8 * kPi * c * c / std::pow(r, 4),
                1e-10 * 8 * kPi * c * c / std::pow(r, 4));
  }
}

TEST(Radii, GeometricLadder) {
  const auto r = geometric_radii(1.0, 4.0, 3);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[1], 2.0);
  EXPECT_DOUBLE_EQ(r[2], 4.0);
  EXPECT_THROW(geometric_radii(1.0, 4.0, 1), ParameterError);
  EXPECT_THROW(geometric_radii(2.0, 1.0, 3), ParameterError);
  const auto u = centered(paraboloid, 65);
  EXPECT_THROW(monotonicity_check(u, 0.1, {0, 0}, {0.3, 0.2}), ParameterError);
  EXPECT_THROW(monotonicity_check(u, 0.1, {0, 0}, {0.05, 0.2}), ResolutionError);
  EXPECT_THROW(monotonicity_check(u, 0.1, {0.8, 0}, {0.1, 0.4}), GeometryError);
}

TEST(Report, CenterWarnings) {
  const auto u = centered(paraboloid, 65);
  const WeissReport ok = monotonicity_check(u, 0.1, {0, 0}, {0.2, 0.3});
  EXPECT_TRUE(ok.warnings.empty());
  const WeissReport off = monotonicity_check(u, 0.1, {0.2, 0.1}, {0.2, 0.3});
  EXPECT_FALSE(off.warnings.empty());
  EXPECT_NEAR(off.center_value, 0.05, 1e-12);
  EXPECT_GT(off.center_gradient, 0.1);
}

TEST(Report, SolvedFieldIsMonotoneAndIdentityTightens) {
  double prev = 1.0;
  for (int n : {65, 129}) {
    const NavierProblem p = quadratic_benchmark(n);
    const SolveResult s = solve_navier(p);
    const Point2 c = detect_free_boundary_point(s.u, 0.2, {0.7071, 0.7071});
    const WeissContext ctx(s.u, p.eps);
    const WeissReport rep = monotonicity_check(ctx, c, geometric_radii(0.046875, 0.15, 6));
    EXPECT_TRUE(rep.monotone) << n;
    double worst = 0.0;
    for (std::size_t k = 0; k < rep.dE.size(); ++k) {
      EXPECT_GE(rep.dissipation[k], 0.0);
      worst = std::max(worst, rep.identity_defect[k]);
    }
    for (std::size_t k = 1; k < rep.energies.size(); ++k)
      EXPECT_GE(rep.energies[k].history_integral, rep.energies[k - 1].history_integral);
    EXPECT_LT(worst, prev) << n;
    prev = worst;
  }
}

TEST(FreeBoundary, DetectionOnSignChange) {
  const auto u = ScalarField2D::rectangle(Grid2D::square(65, 0, 1), [](double x, double) { return x - 0.5; });
  const Point2 p = detect_free_boundary_point(u, 0.1, {0.5, 0.8});
  EXPECT_NEAR(p.x, 0.5, 1.0 / 64 + 1e-12);
  EXPECT_NEAR(p.y, 0.8, 1.0 / 64 + 1e-12);
  const auto pos = ScalarField2D::rectangle(Grid2D::square(33, 0, 1), 1.0);
  EXPECT_THROW(detect_free_boundary_point(pos, 0.1), DomainError);
}

TEST(StrongConvergence, TrivialCases) {
  const auto u = centered(paraboloid, 65);
  const StrongConvergenceReport r = strong_convergence_diag({u, u, u}, {0.1, 0.05, 0.025}, Ball{{0, 0}, 0.5});
  ASSERT_EQ(r.lap_sup.size(), 3u);
  for (double s : r.lap_sup) EXPECT_NEAR(s, 4.0, 1e-10);
  for (const auto& row : r.lap_l2_distance)
    for (double d : row) EXPECT_EQ(d, 0.0);
  EXPECT_NEAR(r.lap_l2[0], 4 * std::sqrt(kPi * 0.25), 1e-3);
  EXPECT_THROW(strong_convergence_diag({u}, {0.1, 0.2}, Ball{{0, 0}, 0.5}), DimensionError);
}
