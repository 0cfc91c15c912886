#pragma once

#include <string>
#include <vector>

#include "fblab/forcing.hpp"
#include "fblab/polar.hpp"
#include "fblab/solver.hpp"

namespace fblab {

enum class DissipationVariant { derivation, printed };

const char* to_string(DissipationVariant v);

/// Component functions of the planar monotonicity formula (n = 2):
///   T = r^-2 oint Lap u u_r
///   D = r^-2 int_{B_r} (|Lap u|^2 + B_eps(u))
///   R = r^-3 int_{B_r} |Lap u|^2 - r^-2 oint Lap u u_rr
///   V = r^-3 oint Lap u u
///   W = oint (5 u_r^2/(2r^3) - 6 u u_r/r^4 + 4 u^2/r^5 - u_th u_thr/r^4 + 3 u_th^2/(2r^5))
/// so that the boundary group of E equals T/2 - V - W.
struct WeissComponents {
  double T = 0.0, D = 0.0, R = 0.0, V = 0.0, W = 0.0;
};

/// Precomputed derivative fields and integrand fields for one (u, eps).
/// Immutable; share across radii and threads.
class WeissContext {
 public:
  WeissContext(const ScalarField2D& u, double eps, const BumpProfile& bump = BumpProfile::standard(),
               int n_theta = kDefaultRingSamples);

  const FieldDerivatives& derivatives() const { return d_; }
  double eps() const { return eps_; }
  int n_theta() const { return n_theta_; }
  double h() const { return d_.u.grid().h; }

  PolarRing ring(Point2 center, double r) const;
  /// int_{B_r} (|Lap u|^2 + B_eps(u))
  double bulk_integral(Point2 center, double r) const;
  double lap_sq_integral(Point2 center, double r) const;
  /// int_{B_r} beta_eps(u) u
  double beta_u_integral(Point2 center, double r) const;

 private:
  FieldDerivatives d_;
  double eps_;
  int n_theta_;
  ScalarField2D lap_sq_;
  ScalarField2D bulk_;
  ScalarField2D beta_u_;
};

WeissComponents weiss_components(const WeissContext& ctx, Point2 center, double r);
WeissComponents weiss_components(const ScalarField2D& u, double eps, Point2 center, double r);

struct WeissEnergy {
  double r = 0.0;
  double E = 0.0;
  double boundary = 0.0;  // seven-term ring integral
  double bulk = 0.0;      // (4 r^2)^-1 int_{B_r} (|Lap u|^2 + B_eps(u))
  /// -1/2 int_{r_min}^r rho^-3 int_{B_rho} beta_eps(u) u; the integral itself
  /// is history_integral.
  double history = 0.0;
  double history_integral = 0.0;
  WeissComponents components;
};

/// Smallest radius the history integral starts from: 3h.
double history_floor(const WeissContext& ctx);

/// E(r) = boundary + bulk + history. The history integral is truncated at
/// history_floor and computed by composite Gauss-Legendre quadrature in rho.
WeissEnergy weiss_energy(const WeissContext& ctx, Point2 center, double r);
WeissEnergy weiss_energy(const ScalarField2D& u, double eps, Point2 center, double r);

/// int_{r1}^{r2} r^-2 oint [(first)^2 + (u_rr - 3u_r/r + 4u/r^2)^2] dr with
/// first = u_thr/r - 2 u_th/r^2 (derivation) or u_thr/r - 2 u_r/r^2 (printed).
double dissipation(const WeissContext& ctx, Point2 center, double r1, double r2,
                   DissipationVariant variant = DissipationVariant::derivation);
double dissipation(const ScalarField2D& u, Point2 center, double r1, double r2,
                   DissipationVariant variant = DissipationVariant::derivation);

struct WeissReport {
  Point2 center;
  DissipationVariant variant = DissipationVariant::derivation;
  std::vector<double> radii;
  std::vector<WeissEnergy> energies;
  /// Per interval [radii[k], radii[k+1]].
  std::vector<double> dE;
  std::vector<double> dissipation;
  std::vector<double> dissipation_other_variant;
  std::vector<double> identity_defect;
  bool monotone = false;
  double monotone_tol_factor = 1e-3;
  /// Measured violation of u(center) = 0 and grad u(center) = 0.
  double center_value = 0.0;
  double center_gradient = 0.0;
  /// Estimate of the truncated history piece below history_floor.
  double history_truncation = 0.0;
  std::vector<std::string> warnings;
};

/// Geometric ladder of `count` radii from r_min to r_max inclusive.
std::vector<double> geometric_radii(double r_min, double r_max, int count);

/// E at each radius, dissipation per consecutive interval, monotone flag
/// (every dE >= -tol_factor (1 + |E|)) and |dE - dissipation| per interval.
WeissReport monotonicity_check(const WeissContext& ctx, Point2 center, const std::vector<double>& radii,
                               DissipationVariant variant = DissipationVariant::derivation,
                               double tol_factor = 1e-3, double center_tol = 1e-2);
WeissReport monotonicity_check(const ScalarField2D& u, double eps, Point2 center, const std::vector<double>& radii,
                               DissipationVariant variant = DissipationVariant::derivation);

/// Limit energy: the same ring terms plus (4 r^2)^-1 int_{B_r} (|Lap u|^2 +
/// chi_{u > 0}), no history term. The indicator stands in for the weak-star
/// limit of B_eps.
double limit_weiss_energy(const ScalarField2D& u, Point2 center, double r);

struct StrongConvergenceReport {
  std::vector<double> eps;
  std::vector<double> lap_l2;            // ||Lap u||_{L^2(B)}
  std::vector<double> lap_sup;           // max |Lap u| over nodes in B
  std::vector<double> transition;        // |{0 < u <= eps} cap B|
  std::vector<std::vector<double>> lap_l2_distance;  // pairwise
};

StrongConvergenceReport strong_convergence_diag(const std::vector<ScalarField2D>& fields,
                                                const std::vector<double>& eps, const Ball& ball);

/// Free-boundary node: a node with a sign change of u among its neighbours,
/// at distance >= margin from the grid edge, minimizing |grad u|. Throws
/// DomainError when u has no sign change there.
Point2 detect_free_boundary_point(const ScalarField2D& u, double margin);
/// Same candidates; the one nearest to `toward`. Stable across grids over the
/// same box when `toward` sits close to the free boundary.
Point2 detect_free_boundary_point(const ScalarField2D& u, double margin, Point2 toward);

}  // namespace fblab
