#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fblab/blowup.hpp"
#include "fblab/errors.hpp"
#include "fblab/operators.hpp"

using namespace fblab;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField2D window_field(double (*f)(double, double), int n = 129) {
  return ScalarField2D::rectangle(Grid2D::square(n, -1, 1), f);
}

double pos(double s) { return s > 0 ? s : 0.0; }
double neg(double s) { return s < 0 ? -s : 0.0; }

// 0.6 s_+^2 / 2 - 0.8 s_-^2 / 2 with s along (cos 30, sin 30)
double rotated_profile(double x, double y) {
  const double s = std::cos(kPi / 6) * x + std::sin(kPi / 6) * y;
  return 0.6 * pos(s) * pos(s) / 2 - 0.8 * neg(s) * neg(s) / 2;
}

}  // namespace

TEST(Rescale, QuadraticIsFixed) {
  const auto u = window_field([](double x, double y) { return x * x + y * y; });
  for (double r : {0.8, 0.3, 0.05}) {
    const ScalarField2D v = rescale(u, {0, 0}, r);
    EXPECT_EQ(v.grid().nx, 65);
    double err = 0.0;
    for (int j = 0; j < 65; ++j)
      for (int i = 0; i < 65; ++i) {
        const double x = v.grid().x(i), y = v.grid().y(j);
        err = std::max(err, std::abs(v(i, j) - (x * x + y * y)));
      }
    EXPECT_LE(err, 1e-10) << r;
  }
}

TEST(Rescale, CubicShrinksLinearly) {
  const auto u = window_field([](double x, double) { return x * x * x; });
  const double r = 0.25;
  const ScalarField2D v = rescale(u, {0, 0}, r);
  for (int i = 0; i < 65; i += 8) {
    const double x = v.grid().x(i);
    EXPECT_NEAR(v(i, 20), r * x * x * x, 1e-12);
  }
}

TEST(Rescale, Composition) {
  const auto u = window_field([](double x, double y) { return std::sin(2 * x + 0.3) * std::cos(y) - 0.2 * x * y; });
  const Point2 c{0.1, -0.2};
  const double r = 0.6, s = 0.5;
  const ScalarField2D twice = rescale(rescale(u, c, r, Grid2D::square(129, -1, 1)), {0, 0}, s);
  const ScalarField2D once = rescale(u, c, r * s);
  EXPECT_LE(max_abs_diff(twice, once), 1e-6);
}

TEST(Rescale, WindowMustFit) {
  const auto u = window_field([](double x, double) { return x; }, 33);
  EXPECT_THROW(rescale(u, {0.5, 0}, 0.6), GeometryError);
  EXPECT_NO_THROW(rescale(u, {0.1, 0}, 0.5));
}

TEST(Fit, OnePhaseProfile) {
  const auto u = window_field([](double x, double) { return pos(x) * pos(x) / 2; });
  const DetachmentFit f = fit_quadratic_detachment(u, {0, 0}, 0.8);
  EXPECT_NEAR(f.alpha, 1.0, 1e-8);
  EXPECT_NEAR(f.gamma, 0.0, 1e-8);
  EXPECT_LE(f.fit_residual, 1e-8);
  EXPECT_NEAR(f.direction.x, 1.0, 1e-8);
  EXPECT_NEAR(f.defect_mixed, 0.0, 1e-7);
  EXPECT_FALSE(f.zero_profile);
}

TEST(Fit, FullParabola) {
  const auto u = window_field([](double x, double) { return x * x / 2; });
  const DetachmentFit f = fit_quadratic_detachment(u, {0, 0}, 0.8);
  EXPECT_NEAR(f.alpha, 1.0, 1e-8);
  EXPECT_NEAR(f.gamma, 1.0, 1e-8);
  EXPECT_NEAR(f.defect_equal, 0.0, 1e-8);
  EXPECT_LE(f.fit_residual, 1e-8);
}

TEST(Fit, RotatedTwoSignProfile) {
  const auto u = window_field(rotated_profile);
  const DetachmentFit f = fit_quadratic_detachment(u, {0, 0}, 0.8);
  EXPECT_NEAR(f.alpha, 0.6, 1e-6);
  EXPECT_NEAR(f.gamma, -0.8, 1e-6);
  EXPECT_NEAR(f.direction.x, std::cos(kPi / 6), 1e-6);
  EXPECT_NEAR(f.direction.y, std::sin(kPi / 6), 1e-6);
  EXPECT_NEAR(std::hypot(f.direction.x, f.direction.y), 1.0, 1e-14);
  EXPECT_LE(f.fit_residual, 1e-8);
}

TEST(Fit, MirroredProfileFlipsDirection) {
  const auto u = window_field([](double x, double y) { return rotated_profile(-x, -y); });
  const DetachmentFit f = fit_quadratic_detachment(u, {0, 0}, 0.8);
  EXPECT_NEAR(f.alpha, 0.6, 1e-6);
  EXPECT_NEAR(f.gamma, -0.8, 1e-6);
  EXPECT_NEAR(f.direction.x, -std::cos(kPi / 6), 1e-6);
}

TEST(Fit, ManyRotationsAndCoefficients) {
  for (double angle : {0.0, 0.4, 1.3, 2.2, 3.0}) {
    for (auto [a, g] : {std::pair{1.5, 1.5}, std::pair{2.0, -0.5}, std::pair{-0.7, -1.2}}) {
      const double cx = std::cos(angle), cy = std::sin(angle);
      const auto u = Grid2D::square(129, -1, 1);
      const ScalarField2D f = ScalarField2D::rectangle(u, [&](double x, double y) {
        const double s = cx * (x - 0.1) + cy * (y + 0.05);
        return a * pos(s) * pos(s) / 2 + g * neg(s) * neg(s) / 2;
      });
      const DetachmentFit fit = fit_quadratic_detachment(f, {0.1, -0.05}, 0.7);
      EXPECT_NEAR(fit.alpha, std::max(a, g), 1e-6) << angle << " " << a << " " << g;
      EXPECT_NEAR(fit.gamma, std::min(a, g), 1e-6) << angle << " " << a << " " << g;
      EXPECT_LE(fit.fit_residual, 1e-8);
    }
  }
}

TEST(Fit, ZeroWindow) {
  const auto u = window_field([](double, double) { return 0.0; }, 65);
  const DetachmentFit f = fit_quadratic_detachment(u, {0, 0}, 0.5);
  EXPECT_TRUE(f.zero_profile);
  EXPECT_EQ(f.alpha, 0.0);
  EXPECT_EQ(f.gamma, 0.0);
  EXPECT_EQ(f.fit_residual, 0.0);
}

TEST(Classify, AdmissibleAndInadmissibleCases) {
  auto c = classify_detachment(2, 2);
  EXPECT_EQ(c.label, DetachmentLabel::both_positive);
  EXPECT_EQ(c.defect, 0.0);
  EXPECT_EQ(classify_detachment(-2, -2).label, DetachmentLabel::both_negative);
  c = classify_detachment(std::sqrt(2.0), -1);
  EXPECT_EQ(c.label, DetachmentLabel::mixed);
  EXPECT_NEAR(c.defect, 0.0, 1e-15);
  EXPECT_EQ(classify_detachment(-1, 0).label, DetachmentLabel::forbidden);
  EXPECT_EQ(classify_detachment(0, 0).label, DetachmentLabel::zero);
  EXPECT_EQ(classify_detachment(1, 0).label, DetachmentLabel::mixed);
}

TEST(Classify, MirrorInvariance) {
  for (auto [a, g] : {std::pair{2.0, 2.0}, std::pair{std::sqrt(2.0), -1.0}, std::pair{-1.0, 0.0}, std::pair{1.0, -0.5},
                      std::pair{0.3, 2.0}}) {
    EXPECT_EQ(classify_detachment(a, g).label, classify_detachment(g, a).label) << a << " " << g;
  }
}

TEST(Classify, ScalingBehaviour) {
  for (double lambda : {0.5, 3.0}) {
    EXPECT_EQ(classify_detachment(2 * lambda, 2 * lambda).label, DetachmentLabel::both_positive);
    EXPECT_EQ(classify_detachment(-2 * lambda, -2 * lambda).label, DetachmentLabel::both_negative);
  }
  const auto scaled = classify_detachment(2 * std::sqrt(2.0), -2);
  EXPECT_EQ(scaled.label, DetachmentLabel::unclassified);
  EXPECT_EQ(scaled.candidate, DetachmentLabel::mixed);
  EXPECT_NEAR(scaled.defect, 3.0, 1e-12);
}

TEST(Classify, Tolerances) {
  EXPECT_EQ(classify_detachment(1.0, 1.015).label, DetachmentLabel::both_positive);
  EXPECT_EQ(classify_detachment(1.0, 1.05).label, DetachmentLabel::unclassified);
  EXPECT_EQ(classify_detachment(0.005, -0.003).label, DetachmentLabel::zero);
}

TEST(DetachmentIdentity, StandardBumpHasUnitTrace) {
  const ScalarBump psi = standard_detachment_bump();
  EXPECT_LT(psi.support().xlo, 0.0);
  EXPECT_GT(psi.support().xhi, 0.0);
  // trace by composite Simpson on x1 = 0
  const int m = 4000;
  const double a = psi.support().ylo, b = psi.support().yhi, hh = (b - a) / m;
  double s = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double w = (k == 0 || k == m) ? 1 : (k % 2 ? 4 : 2);
    s += w * psi.value({0.0, a + k * hh});
  }
  EXPECT_NEAR(s * hh / 3, 1.0, 1e-9);
}

TEST(DetachmentIdentity, AdmissibleCasesVanish) {
  const ScalarBump psi = standard_detachment_bump();
  EXPECT_LE(std::abs(detachment_identity_residual(1, 1, psi)), 1e-6);
  EXPECT_LE(std::abs(detachment_identity_residual(-1.5, -1.5, psi)), 1e-6);
  EXPECT_LE(std::abs(detachment_identity_residual(std::sqrt(2.0), -1, psi)), 1e-6);
  EXPECT_LE(std::abs(detachment_identity_residual(1, 0, psi)), 1e-6);
}

TEST(DetachmentIdentity, InadmissibleCasesDoNot) {
  const ScalarBump psi = standard_detachment_bump();
  // half-plane integrals of psi_1 are -1 and +1 for the unit-trace bump
  EXPECT_NEAR(detachment_identity_residual(1, -1, psi), 1.0, 1e-6);
  EXPECT_NEAR(detachment_identity_residual(-1, 0, psi), -1.0, 1e-6);
  EXPECT_NEAR(detachment_identity_residual(2, 1, psi), -3.0, 1e-6);
}

TEST(Homogeneity, Cases) {
  const auto h2 = window_field([](double x, double y) { return x * x - y * y; });
  EXPECT_LE(homogeneity_defect(h2, {0, 0}, {0.2, 0.4, 0.6}), 1e-8);
  const auto zero = window_field([](double, double) { return 0.0; }, 65);
  EXPECT_EQ(homogeneity_defect(zero, {0, 0}, {0.3}), 0.0);
  // x . grad(x^3) - 2 x^3 = x^3: ratio (8/3) / (8/3 + 3 pi)
  const auto cubic = window_field([](double x, double) { return x * x * x; });
  EXPECT_NEAR(homogeneity_defect(cubic, {0, 0}, {0.3, 0.5}), 8.0 / (8.0 + 9.0 * kPi), 1e-6);
}

TEST(Sequence, OnePhaseProfileIsStable) {
  const auto u = window_field([](double x, double) { return pos(x) * pos(x) / 2; });
  const auto steps = blowup_sequence(u, {0, 0}, {0.8, 0.4, 0.2});
  ASSERT_EQ(steps.size(), 3u);
  EXPECT_TRUE(std::isnan(steps[0].cauchy_gap));
  for (const auto& s : steps) {
    EXPECT_EQ(s.cls.label, DetachmentLabel::mixed) << s.r;
    EXPECT_NEAR(s.fit.alpha, 1.0, 1e-3);
  }
  EXPECT_LE(steps[2].cauchy_gap, 1e-3);
}
