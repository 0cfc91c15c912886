#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fblab/errors.hpp"
#include "fblab/operators.hpp"
#include "fblab/solver.hpp"

using namespace fblab;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField2D unit_square(int n, double value) { return ScalarField2D::rectangle(Grid2D::square(n, 0, 1), value); }

// B_1(v) from the closed form of the bump, normalization recomputed here
double oracle_big_beta(double v) {
  static const double c = [] {
    auto raw = [](double t) { return t <= 0 || t >= 1 ? 0.0 : std::exp(-1 / (t * (1 - t))); };
    return 1.0 / gauss_kronrod<double, 61>::integrate(raw, 0.0, 1.0, 20, 1e-15);
  }();
  if (v <= 0) return 0.0;
  if (v >= 1) return 1.0;
  auto b = [](double t) { return t <= 0 || t >= 1 ? 0.0 : c * std::exp(-1 / (t * (1 - t))); };
  return gauss_kronrod<double, 31>::integrate(b, 0.0, v, 15, 1e-13);
}

bool nonincreasing(const std::vector<IterationRecord>& tr) {
  for (std::size_t k = 1; k < tr.size(); ++k)
    if (tr[k].energy > tr[k - 1].energy) return false;
  return true;
}

}  // namespace

TEST(Energy, ZeroField) {
  EXPECT_EQ(energy(unit_square(17, 0.0), 0.1), 0.0);
  EXPECT_EQ(energy_limit(unit_square(17, 0.0)), 0.0);
}

TEST(Energy, ConstantAboveStrip) {
  const double eps = 0.05;
  EXPECT_NEAR(energy(unit_square(33, 2 * eps), eps), 1.0, 1e-12);
  EXPECT_NEAR(energy_limit(unit_square(33, 1.0)), 1.0, 1e-12);
}

TEST(Energy, LimitOfPlaneIsHalfSquare) {
  const auto u = ScalarField2D::rectangle(Grid2D::square(65, -1, 1), [](double x, double) { return x; });
  EXPECT_NEAR(energy_limit(u), 2.0, 1e-12);
}

TEST(Energy, QuadraticAgainstQuadratureOracle) {
  const auto u = ScalarField2D::rectangle(Grid2D::square(129, 0, 1), [](double x, double y) { return x * x + y * y; });
  auto inner = [](double x) {
    return gauss_kronrod<double, 31>::integrate([x](double y) { return oracle_big_beta(x * x + y * y); }, 0.0, 1.0, 12,
                                                1e-11);
  };
  const double oracle = 16.0 + gauss_kronrod<double, 31>::integrate(inner, 0.0, 1.0, 12, 1e-11);
  EXPECT_NEAR(energy(u, 1.0), oracle, 1e-4);
}

TEST(Energy, UndefinedValuesRaiseDomainError) {
  auto u = unit_square(17, 0.0);
  u(5, 5) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(energy(u, 0.1), DomainError);
  EXPECT_THROW(energy(unit_square(17, 0.0), 0.0), ParameterError);
}

TEST(Energy, BulkBoundedByArea) {
  const auto u = ScalarField2D::rectangle(Grid2D::square(65, 0, 1), [](double x, double y) { return 0.3 * x - 0.1 * y; });
  const double e = energy(u, 0.1);  // Lap u = 0
  EXPECT_GE(e, 0.0);
  EXPECT_LE(e, 1.0);
}

TEST(EnergyGapBound, HoldsExactlyInDiscreteForm) {
  const Grid2D g = Grid2D::square(65, -1, 1);
  const std::vector<ScalarField2D> fields = {
      ScalarField2D::rectangle(g, 0.0),
      ScalarField2D::rectangle(g, [](double x, double) { return x; }),
      ScalarField2D::rectangle(g, [](double x, double y) { return x * x + y * y - 0.4; }),
      ScalarField2D::rectangle(g, [](double x, double y) { return 0.2 * std::sin(3 * x) * std::cos(2 * y); }),
  };
  for (const auto& v : fields) {
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
      const double gap = energy_limit(v) - energy(v, eps);
      EXPECT_GE(gap, -1e-12);
      EXPECT_LE(gap, transition_measure(v, eps) + 1e-12);
    }
  }
}

TEST(TransitionMeasure, Examples) {
  const double eps = 0.1;
  EXPECT_EQ(transition_measure(unit_square(17, 0.0), eps, Ball{{0.5, 0.5}, 0.4}), 0.0);
  EXPECT_EQ(transition_measure(unit_square(17, 2 * eps), eps, Ball{{0.5, 0.5}, 0.4}), 0.0);
  const auto u = ScalarField2D::rectangle(Grid2D::square(201, -1, 1), [](double x, double) { return x; });
  // strip 0 < x <= 0.1 inside the unit disc
  const double exact = 0.1 * std::sqrt(0.99) + std::asin(0.1);
  EXPECT_NEAR(transition_measure(u, eps, Ball{{0, 0}, 1.0}), exact, 2e-4);
  EXPECT_NEAR(transition_measure(u, eps), 0.2, 1e-12);
}

TEST(Navier, ZeroDataGivesZero) {
  NavierProblem p(unit_square(33, 0.0), 0.1);
  const SolveResult r = solve_navier(p, unit_square(33, 0.0));
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(r.report.iterations, 1);
  EXPECT_EQ(max_abs(r.u), 0.0);
  EXPECT_EQ(r.report.final_residual, 0.0);
}

TEST(Navier, ConstantAboveStripIsReturned) {
  const double eps = 0.05;
  NavierProblem p(unit_square(33, 2 * eps), eps);
  const SolveResult r = solve_navier(p);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.final_residual, 0.0);
  EXPECT_EQ(r.report.iterations, 0);
  for (double v : r.u.values()) EXPECT_EQ(v, 2 * eps);
}

TEST(Navier, ValidatesParameters) {
  EXPECT_THROW(solve_navier(NavierProblem(unit_square(17, 0.0), 0.0)), ParameterError);
  EXPECT_THROW(solve_navier(NavierProblem(unit_square(17, 0.0), 1.5)), ParameterError);
  SolverTolerances t;
  t.residual_tol = 0.0;
  EXPECT_THROW(solve_navier(NavierProblem(unit_square(17, 0.0), 0.1, t)), ParameterError);
}

TEST(Navier, IterationBudgetRaisesWithBestIterate) {
  NavierProblem p = quadratic_benchmark(33);
  p.tol.max_iter = 1;
  try {
    solve_navier(p);
    FAIL() << "expected IterationError";
  } catch (const IterationError& e) {
    EXPECT_EQ(e.best().grid(), p.boundary_data.grid());
    EXPECT_GT(e.report().final_residual, p.tol.residual_tol);
  }
}

TEST(Navier, InitialGuessIsHarmonic) {
  const NavierProblem p = quadratic_benchmark(33);
  const ScalarField2D u = default_initial_guess(p);
  const ScalarField2D L = laplacian(u);
  for (int j = 1; j < 32; ++j)
    for (int i = 1; i < 32; ++i) EXPECT_NEAR(L(i, j), 0.0, 1e-9);
  EXPECT_EQ(u(0, 7), p.boundary_data(0, 7));
}

TEST(Navier, RootIsCriticalPoint) {
  const NavierProblem p = quadratic_benchmark(65);
  const SolveResult r = solve_navier(p);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(r.report.final_residual, p.tol.residual_tol);
  // gradient of h^2 sum (Lap_h u)^2 + B_eps(u) is h^2 (2 Lap_h w + beta_eps(u))
  const double h = p.boundary_data.grid().h;
  EXPECT_LE(h * h * navier_residual(r.u, p.eps), 10 * p.tol.residual_tol);
  EXPECT_GT(r.report.transition_area, 0.0);
}

TEST(CrossValidation, NewtonAndDescentAgree) {
  const NavierProblem p = quadratic_benchmark(65);
  const SolveResult newton = solve_navier(p);
  const SolveResult descent = minimize_energy(p, default_initial_guess(p));
  const double h = p.boundary_data.grid().h;
  EXPECT_LE(max_abs_diff(newton.u, descent.u), 10 * h * h);
  EXPECT_NEAR(descent.report.energy / newton.report.energy, 1.0, 1e-6);
  EXPECT_TRUE(nonincreasing(descent.report.trace));
}

TEST(Descent, StartsAtCriticalPoint) {
  const NavierProblem p = quadratic_benchmark(65);
  const SolveResult newton = solve_navier(p);
  const SolveResult d = minimize_energy(p, newton.u);
  EXPECT_LE(d.report.iterations, 1);
  EXPECT_NEAR(discrete_functional(d.u, p.eps), discrete_functional(newton.u, p.eps), 1e-12);
}

TEST(Descent, ZeroDataReachesZero) {
  NavierProblem p(unit_square(33, 0.0), 0.1);
  const auto init = unit_square(33, 0.0).with_values(
      [](double x, double y) { return 0.02 * std::sin(kPi * x) * std::sin(kPi * y) - 0.01 * x * (1 - x); });
  auto start = init;
  for (int k = 0; k < 33; ++k) start(0, k) = start(32, k) = start(k, 0) = start(k, 32) = 0.0;
  const SolveResult r = minimize_energy(p, start);
  EXPECT_TRUE(nonincreasing(r.report.trace));
  EXPECT_LE(max_abs(r.u), 1e-6);
  EXPECT_LE(r.report.energy, 1e-8);
}

TEST(Descent, FrozenLayerKeepsInitialValues) {
  const NavierProblem p = quadratic_benchmark(33);
  const ScalarField2D init = default_initial_guess(p);
  DescentOptions o;
  o.freeze_layer = true;
  const SolveResult r = minimize_energy(p, init, o);
  EXPECT_TRUE(nonincreasing(r.report.trace));
  for (int k = 1; k < 32; ++k) {
    EXPECT_EQ(r.u(1, k), init(1, k));
    EXPECT_EQ(r.u(k, 31), init(k, 31));
  }
}

TEST(Benchmark, Geometry) {
  const NavierProblem p = quadratic_benchmark();
  EXPECT_EQ(p.boundary_data.grid().nx, 129);
  EXPECT_DOUBLE_EQ(p.boundary_data.grid().h, 1.0 / 128);
  EXPECT_EQ(p.eps, 0.05);
  EXPECT_NEAR(p.boundary_data(128, 0), 0.0, 1e-15);  // (1, 0) lies on the zero circle
}
