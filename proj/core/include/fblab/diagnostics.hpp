#pragma once

#include <string>
#include <vector>

#include "fblab/grid.hpp"
#include "fblab/solver.hpp"

namespace fblab {

/// Discrete W^{2,p} distance: (h^2 sum (|d|^p + |grad d|^p + |D^2 d|^p))^{1/p}
/// with d = a - b over nodes where the Hessian of d is defined. |D^2 d| is the
/// Frobenius norm.
double w2p_distance(const ScalarField2D& a, const ScalarField2D& b, double p);

/// Max over dyadic sub-squares of the bounding box (side >= 4h) of the mean
/// absolute deviation of f over the defined nodes inside the square.
double bmo_seminorm(const ScalarField2D& f);

/// L^2 norm of the nodewise difference of the five-point Laplacians.
double laplacian_l2_distance(const ScalarField2D& a, const ScalarField2D& b);

struct SweepRow {
  double eps = 0.0;
  bool ok = false;
  std::string error;
  int iterations = 0;
  double residual = 0.0;
  /// Differences against the previous successful row; NaN on the first.
  double sup_diff = 0.0;
  double grad_sup_diff = 0.0;
  double w22_diff = 0.0;
  double w24_diff = 0.0;
  double lap_l2_diff = 0.0;
  double bmo = 0.0;
  double J_eps = 0.0;
  double J_limit = 0.0;
  double transition_area = 0.0;
};

struct ConvergenceReport {
  std::vector<SweepRow> rows;
  /// Solved fields by row; empty fields for failed rows.
  std::vector<ScalarField2D> fields;
};

/// Solves the template problem for each epsilon (from the default initial
/// guess, independently and possibly concurrently) and reports consecutive
/// differences. Solver failures are recorded in the row and the sweep goes on.
ConvergenceReport eps_sweep(const NavierProblem& tmpl, const std::vector<double>& eps_list);

/// True when the finite entries of v decrease strictly.
bool strictly_decreasing(const std::vector<double>& v);

struct DecayReport {
  Point2 x0;
  double R = 0.0;
  double R0 = 0.0;
  double grad_integral = 0.0;  // int_{B_R} |grad u|^2
  double hess_integral = 0.0;  // int_{B_R} |D^2 u|^2
  double lhs = 0.0;            // R^-4 grad + R^-2 hess
  double m = 0.0;              // min of u over B_{4R}
  double var_integral = 0.0;   // int_{B_4R} (u - m)^2
  double mean_integral = 0.0;  // int_{B_4R} (u - m)
  double c_hat = 0.0;          // mean of Lap u over B_{R0}
  /// Smallest C >= 0 with lhs <= C R^-6 var + c_hat R^-4 mean.
  double fitted_C = 0.0;
  /// Smallest C >= 0 with lhs <= C R^-6 var - c_hat R^-4 mean, the sign the
  /// Caccioppoli step gives from Lap u >= c_hat.
  double fitted_C_signed = 0.0;
};

/// Fits the constant of the decay estimate (n = 2). Both constants are 0 when
/// the variance term vanishes.
DecayReport decay_estimate_check(const ScalarField2D& u, double eps, Point2 x0, double R, double R0);

}  // namespace fblab
