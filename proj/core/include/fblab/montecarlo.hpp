#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fblab/grid.hpp"
#include "fblab/solver.hpp"

namespace fblab {

/// Lattice game: from an interior node the token moves to one of the 2n
/// lattice neighbours with equal probability every tau = h^2; each step costs
/// v(x) tau; reaching a boundary node pays the prize there.
struct GameConfig {
  /// Boundary nodes carry the prize u0; the mask fixes the domain.
  ScalarField2D prize;
  /// Running penalty on interior nodes.
  ScalarField2D penalty;
  /// 1: moves along x only (rows are independent intervals); 2: planar walk.
  int dimension = 2;
  double interface_prize = 0.5;
  double eps = 0.1;
  /// Horizon in time units; trajectories still inside are censored.
  double t_max = 20.0;
  int samples = 100000;
  std::uint64_t seed = 1;
  /// Drop beta_eps in the coupled stationary solve.
  bool forcing_off = false;

  GameConfig(ScalarField2D prize, ScalarField2D penalty);

  double h() const { return prize.grid().h; }
  /// Always h^2.
  double tau() const { return h() * h(); }
  /// Throws on mismatched grids, samples < 1, dimension outside {1, 2}, a
  /// non-positive horizon or fewer than 3 interior nodes per axis.
  void validate() const;
};

struct WalkEstimate {
  int i = 0, j = 0;
  double mean = 0.0;
  /// Sample standard deviation / sqrt(N).
  double std_error = 0.0;
  double mean_exit_time = 0.0;
  double exit_time_std_error = 0.0;
  long censored = 0;
  long samples = 0;
};

/// N independent trajectories from node (i, j). Trajectory t draws from its
/// own generator seeded by (seed, node, t), so results do not depend on the
/// worker count. Censored trajectories keep their accumulated cost.
WalkEstimate simulate_walk(const GameConfig& cfg, int i, int j);

struct CoupledSolution {
  ScalarField2D u;
  ScalarField2D v;
  SolveReport report;
};

/// Lap u = v, Lap v = -beta_eps(u) / 2 with u = u0, v = 0 on the boundary, by
/// the block Newton iteration of solve_navier.
CoupledSolution coupled_stationary_solve(const GameConfig& cfg);

/// Stationary value of the walk: (1/(2n)) Lap_h u = penalty with the prize as
/// Dirichlet data, by a sparse direct solve.
ScalarField2D walk_expectation_pde(const GameConfig& cfg);

struct GameProbeRow {
  double px = 0.0, py = 0.0;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double pde_value = 0.0;
  double z = 0.0;
  long censored = 0;
};

struct GameReport {
  std::vector<GameProbeRow> rows;
  int within_3se = 0;
  double censored_fraction = 0.0;
};

/// Walk estimates against walk_expectation_pde at the probe nodes. z is
/// (mc - pde) / se; zero-variance probes get z = 0 on an exact match and
/// infinity otherwise.
GameReport validate_game_vs_pde(const GameConfig& cfg, const std::vector<std::pair<int, int>>& probes);

/// Ten interior probe nodes spread over the grid, away from the boundary.
std::vector<std::pair<int, int>> default_probes(const Grid2D& grid);

}  // namespace fblab
