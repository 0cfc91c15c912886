#pragma once

// Private: sparse discretization shared by the solver and the game module.

#include <Eigen/Sparse>
#include <vector>

#include "fblab/forcing.hpp"
#include "fblab/grid.hpp"
#include "fblab/solver.hpp"

namespace fblab::detail {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Interior nodes are unknowns; boundary nodes carry data. Lap_h u at the
/// interior nodes equals L * u_I + b(u_B).
class NavierSystem {
 public:
  explicit NavierSystem(const ScalarField2D& domain);

  int unknowns() const { return static_cast<int>(node_of_.size()); }
  const SpMat& L() const { return L_; }
  const Grid2D& grid() const { return grid_; }

  /// Boundary contribution of the given field's boundary values.
  Vec boundary_term(const ScalarField2D& f) const;
  Vec gather(const ScalarField2D& f) const;
  /// Writes the interior values; other nodes keep their values.
  void scatter(const Vec& x, ScalarField2D& f) const;
  /// Unknown index per node, -1 for data nodes.
  const std::vector<int>& unknown_of() const { return unknown_of_; }
  const std::vector<std::size_t>& node_of() const { return node_of_; }

 private:
  Grid2D grid_;
  std::vector<int> unknown_of_;
  std::vector<std::size_t> node_of_;
  SpMat L_;
};

/// Dirichlet data on boundary nodes taken from `data`, defined nodes only.
ScalarField2D with_boundary_of(const ScalarField2D& initial, const ScalarField2D& data);

/// Damped Newton on the block system L u + b = w, scale * (2 L w + beta_eps(u)) = 0.
/// `beta_off` drops the forcing. Reported residuals are those of the scaled
/// equations.
SolveResult newton_navier(const NavierProblem& p, const ScalarField2D& initial, double scale, bool beta_off);

}  // namespace fblab::detail
