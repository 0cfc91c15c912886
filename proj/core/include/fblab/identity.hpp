#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fblab/forcing.hpp"
#include "fblab/grid.hpp"

namespace fblab {

struct Box {
  double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
  bool contains(Point2 p) const { return p.x > xlo && p.x < xhi && p.y > ylo && p.y < yhi; }
};

/// Exponential bump b(t) = exp(-1 / (t (1 - t))) on (0, 1) and its first two
/// derivatives, zero outside.
struct Bump1D {
  static double value(double t);
  static double d1(double t);
  static double d2(double t);
};

/// phi = amplitude * b(tx) * b(ty) with tx, ty the box-relative coordinates.
/// Every derivative is evaluated in closed form.
class TestVectorField {
 public:
  struct Jet {
    std::array<double, 2> value{};
    /// jac[i][j] = d_j phi^i
    std::array<std::array<double, 2>, 2> jac{};
    std::array<double, 2> lap{};
    double div() const { return jac[0][0] + jac[1][1]; }
  };

  TestVectorField(Box support, std::array<double, 2> amplitude);

  const Box& support() const { return box_; }
  const std::array<double, 2>& amplitude() const { return amp_; }
  Jet eval(Point2 p) const;
  TestVectorField scaled(double lambda) const;

 private:
  Box box_;
  std::array<double, 2> amp_;
};

/// Throws ParameterError on an empty box.
TestVectorField make_bump_field(const Box& support, std::array<double, 2> amplitude);

struct IdentityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  /// |lhs - rhs| / max(|lhs|, |rhs|), 0 when both vanish.
  double relative_defect = 0.0;
};

/// lhs = 2 int (2 tr(D^2u Dphi) + grad u . Lap phi) Lap u,
/// rhs = int div phi (|Lap u|^2 + B_eps(u)), both as nodal sums h^2 sum over the
/// support; the rhs integrand is taken relative to its value at the node
/// nearest the box center, which int div phi = 0 allows and which keeps
/// constant fields exact; residual = |lhs - rhs| / (1 + |lhs| + |rhs|). Throws GeometryError
/// when the Hessian of u is missing at a node inside the support.
IdentityResult identity_residual(const ScalarField2D& u, double eps, const TestVectorField& phi,
                                 const BumpProfile& bump = BumpProfile::standard());

struct IdentitySuiteRow {
  int field_id = 0;
  Box support;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double relative_defect = 0.0;
};

struct IdentitySuiteReport {
  std::vector<IdentitySuiteRow> rows;
  double max_residual = 0.0;
  double median_residual = 0.0;
  double max_relative_defect = 0.0;
};

/// Random bump fields drawn from `seed` alone: boxes inside the middle 80% of
/// the grid's bounding box, so the same seed gives the same fields on every
/// grid over that box.
std::vector<TestVectorField> random_bump_fields(const Grid2D& grid, int n_fields, std::uint64_t seed);

IdentitySuiteReport identity_suite(const ScalarField2D& u, double eps, int n_fields, std::uint64_t seed,
                                   const BumpProfile& bump = BumpProfile::standard());

}  // namespace fblab
