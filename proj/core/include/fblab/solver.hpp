#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fblab/errors.hpp"
#include "fblab/forcing.hpp"
#include "fblab/grid.hpp"

namespace fblab {

struct SolverTolerances {
  double residual_tol = 1e-8;
  int max_iter = 100;
  double damping_floor = 0x1p-20;
};

/// Hinged (Navier) problem: 2 Lap^2 u = -beta_eps(u) in the interior nodes,
/// u = u0 and Lap u = 0 on the boundary nodes of `boundary_data`.
struct NavierProblem {
  ScalarField2D boundary_data;
  double eps = 0.1;
  std::shared_ptr<const BumpProfile> forcing;
  SolverTolerances tol;

  NavierProblem(ScalarField2D u0, double eps, SolverTolerances tol = {});

  const BumpProfile& bump() const { return *forcing; }
  /// Throws ParameterError on eps outside (0, 1], non-finite boundary data or
  /// a non-positive tolerance.
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double residual = 0.0;
  double energy = 0.0;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  /// Max norm of the split residuals Lap u - w and 2 Lap w + beta_eps(u) over
  /// interior nodes (Newton), or of the functional's gradient (descent).
  double final_residual = 0.0;
  /// Diagnostic energy J_eps[u] (see energy()).
  double energy = 0.0;
  /// |{0 < u <= eps}| over the whole domain.
  double transition_area = 0.0;
  /// Per-iteration discrete functional h^2 sum_I [(Lap_h u)^2 + B_eps(u)],
  /// the quantity minimize_energy decreases.
  std::vector<IterationRecord> trace;
  std::vector<std::string> notes;
};

struct SolveResult {
  ScalarField2D u;
  SolveReport report;
};

/// Raised when the iteration budget runs out or the damped step stalls.
class IterationError : public Error {
 public:
  IterationError(const std::string& what, ScalarField2D best, SolveReport report)
      : Error(what), best_(std::move(best)), report_(std::move(report)) {}
  const ScalarField2D& best() const { return best_; }
  const SolveReport& report() const { return report_; }
  const char* kind() const noexcept override { return "iteration"; }

 private:
  ScalarField2D best_;
  SolveReport report_;
};

enum class BoundaryLaplacian { one_sided, zero };

/// J_eps[u] = int |Lap u|^2 + B_eps(u) by cell quadrature: corner average of
/// |Lap_h u|^2 and bilinear sub-sampling of B_eps(u) on every cell.
/// With BoundaryLaplacian::zero the Navier value Lap u = 0 is used on boundary
/// nodes instead of one-sided stencils.
double energy(const ScalarField2D& u, double eps, const BumpProfile& bump = BumpProfile::standard(),
              BoundaryLaplacian bl = BoundaryLaplacian::one_sided, int subsamples = 8);

/// J[u] = int |Lap u|^2 + chi_{u > 0}, same quadrature.
double energy_limit(const ScalarField2D& u, BoundaryLaplacian bl = BoundaryLaplacian::one_sided,
                    int subsamples = 8);

/// Box [lo, hi]^2 with n x n nodes and data u0 = x^2 + y^2 - offset: the
/// zero level set is a circle crossing the interior.
NavierProblem quadratic_benchmark(int n = 129, double eps = 0.05, double offset = 1.0, double lo = 0.0,
                                  double hi = 1.0);

/// Discrete harmonic extension of the boundary data (the beta = 0 solution of
/// the hinged problem, since Lap u then vanishes identically).
ScalarField2D default_initial_guess(const NavierProblem& p);

/// Damped Newton on the split system Lap u = w, 2 Lap w = -beta_eps(u) with
/// u = u0, w = 0 on the boundary. Boundary nodes of `initial` are replaced by
/// the boundary data.
SolveResult solve_navier(const NavierProblem& p, const ScalarField2D& initial);
SolveResult solve_navier(const NavierProblem& p);

struct DescentOptions {
  /// Freeze the first interior layer at its initial values (W_0^{1,2}-style
  /// constraint on u - u0). Off by default: the hinged natural condition.
  bool freeze_layer = false;
  int max_iter = 5000;
  double min_relative_decrease = 1e-14;
};

/// Monotone descent on the discrete functional: preconditioned (Sobolev H^2)
/// gradient steps with Armijo backtracking.
SolveResult minimize_energy(const NavierProblem& p, const ScalarField2D& initial, DescentOptions opt = {});

/// Max norm over interior nodes of 2 Lap_h(Lap_h u) + beta_eps(u), with the
/// inner Laplacian set to zero on boundary nodes.
double navier_residual(const ScalarField2D& u, double eps, const BumpProfile& bump = BumpProfile::standard());

/// Discrete functional h^2 sum over interior nodes of (Lap_h u)^2 + B_eps(u).
double discrete_functional(const ScalarField2D& u, double eps, const BumpProfile& bump = BumpProfile::standard());

struct Ball {
  Point2 center;
  double radius = 0.0;
};

/// |{0 < u <= eps} cap ball cap domain| by bilinear sub-sampling of cells.
double transition_measure(const ScalarField2D& u, double eps, const Ball& ball, int subsamples = 8);
/// Same over the whole domain.
double transition_measure(const ScalarField2D& u, double eps, int subsamples = 8);

/// |{u > 0} cap ball cap domain|, same sampling.
double positivity_measure(const ScalarField2D& u, const Ball& ball, int subsamples = 8);

}  // namespace fblab
