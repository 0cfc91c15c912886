#include "fblab/montecarlo.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <sstream>

#include "fblab/errors.hpp"
#include "fblab/parallel.hpp"
#include "navier_system.hpp"

namespace fblab {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t m = v.size() / 2;
  return pairwise_sum(v.first(m)) + pairwise_sum(v.subspan(m));
}

struct Moments {
  double mean = 0.0, se = 0.0;
};

Moments moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  Moments m;
  m.mean = pairwise_sum(x) / n;
  if (x.size() < 2) return m;
  std::vector<double> dev(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) dev[k] = (x[k] - m.mean) * (x[k] - m.mean);
  m.se = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
  return m;
}

}  // namespace

GameConfig::GameConfig(ScalarField2D prize_, ScalarField2D penalty_)
    : prize(std::move(prize_)), penalty(std::move(penalty_)) {}

void GameConfig::validate() const {
  if (!(prize.grid() == penalty.grid())) throw DimensionError("prize and penalty live on different grids");
  if (samples < 1) throw ParameterError("samples must be >= 1");
  if (dimension != 1 && dimension != 2) throw ParameterError("dimension must be 1 or 2");
  if (!(t_max > 0.0)) throw ParameterError("horizon must be positive");
  if (!(eps > 0.0) || eps > 1.0) throw ParameterError("epsilon must lie in (0, 1]");
  const Grid2D& g = prize.grid();
  int max_row = 0, max_col = 0;
  for (int j = 0; j < g.ny; ++j) {
    int row = 0;
    for (int i = 0; i < g.nx; ++i) row += prize.kind(i, j) == NodeKind::interior;
    max_row = std::max(max_row, row);
  }
  for (int i = 0; i < g.nx; ++i) {
    int col = 0;
    for (int j = 0; j < g.ny; ++j) col += prize.kind(i, j) == NodeKind::interior;
    max_col = std::max(max_col, col);
  }
  if (max_row < 3 || max_col < 3) throw DimensionError("game domain needs 3 interior nodes per axis");
}

WalkEstimate simulate_walk(const GameConfig& cfg, int i0, int j0) {
  cfg.validate();
  const ScalarField2D& prize = cfg.prize;
  const Grid2D& g = prize.grid();
  if (!prize.defined(i0, j0)) throw GeometryError("start node lies outside the domain");
  WalkEstimate est;
  est.i = i0;
  est.j = j0;
  est.samples = cfg.samples;
  if (prize.kind(i0, j0) == NodeKind::boundary) {
    est.mean = prize(i0, j0);
    return est;
  }
  const double tau = cfg.tau();
  const long max_steps = static_cast<long>(std::ceil(cfg.t_max / tau));
  const int moves = 2 * cfg.dimension;
  static constexpr int di[4] = {1, -1, 0, 0};
  static constexpr int dj[4] = {0, 0, 1, -1};
  const std::uint64_t stream = splitmix64(cfg.seed ^ splitmix64(g.index(i0, j0)));

  const std::size_t n = static_cast<std::size_t>(cfg.samples);
  std::vector<double> payoff(n), exit_time(n);
  std::vector<char> censored(n, 0);
  const std::size_t chunk = 1024;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  parallel_for(chunks, [&](std::size_t c) {
    for (std::size_t t = c * chunk; t < std::min(n, (c + 1) * chunk); ++t) {
      std::mt19937_64 rng(splitmix64(stream + t));
      int i = i0, j = j0;
      double cost = 0.0;
      long steps = 0;
      std::uint64_t bits = 0;
      int left = 0;
      bool inside = true;
      while (steps < max_steps) {
        cost += cfg.penalty(i, j) * tau;
        if (left == 0) {
          bits = rng();
          left = 32;
        }
        const int m = static_cast<int>(bits & 3u) % moves;
        bits >>= 2;
        --left;
        i += di[m];
        j += dj[m];
        ++steps;
        if (prize.kind(i, j) != NodeKind::interior) {
          inside = false;
          break;
        }
      }
      payoff[t] = inside ? -cost : prize(i, j) - cost;
      censored[t] = inside;
      exit_time[t] = static_cast<double>(steps) * tau;
    }
  });
  const Moments pm = moments(payoff), tm = moments(exit_time);
  est.mean = pm.mean;
  est.std_error = pm.se;
  est.mean_exit_time = tm.mean;
  est.exit_time_std_error = tm.se;
  for (char c : censored) est.censored += c;
  return est;
}

CoupledSolution coupled_stationary_solve(const GameConfig& cfg) {
  cfg.validate();
  NavierProblem p(cfg.prize, cfg.eps);
  const ScalarField2D initial = default_initial_guess(p);
  SolveResult r = detail::newton_navier(p, initial, 0.5, cfg.forcing_off);
  const detail::NavierSystem sys(cfg.prize);
  const detail::Vec w = sys.L() * sys.gather(r.u) + sys.boundary_term(r.u);
  ScalarField2D v = r.u.with_values([](double, double) { return 0.0; });
  sys.scatter(w, v);
  return {std::move(r.u), std::move(v), std::move(r.report)};
}

ScalarField2D walk_expectation_pde(const GameConfig& cfg) {
  cfg.validate();
  const ScalarField2D& prize = cfg.prize;
  const Grid2D& g = prize.grid();
  std::vector<int> unknown(g.size(), -1);
  std::vector<std::size_t> node;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (prize.kind(i, j) != NodeKind::interior) continue;
      unknown[g.index(i, j)] = static_cast<int>(node.size());
      node.push_back(g.index(i, j));
    }
  }
  // Mean over the 2n neighbours minus the centre equals tau * penalty.
  const int moves = 2 * cfg.dimension;
  static constexpr int di[4] = {1, -1, 0, 0};
  static constexpr int dj[4] = {0, 0, 1, -1};
  std::vector<Eigen::Triplet<double>> trip;
  detail::Vec rhs(static_cast<Eigen::Index>(node.size()));
  for (std::size_t k = 0; k < node.size(); ++k) {
    const int i = static_cast<int>(node[k] % g.nx), j = static_cast<int>(node[k] / g.nx);
    const int row = static_cast<int>(k);
    trip.emplace_back(row, row, static_cast<double>(moves));
    double b = -cfg.tau() * moves * cfg.penalty(i, j);
    for (int m = 0; m < moves; ++m) {
      const int ii = i + di[m], jj = j + dj[m];
      const int col = unknown[g.index(ii, jj)];
      if (col >= 0) {
        trip.emplace_back(row, col, -1.0);
      } else {
        b += prize(ii, jj);
      }
    }
    rhs[row] = b;
  }
  detail::SpMat A(static_cast<Eigen::Index>(node.size()), static_cast<Eigen::Index>(node.size()));
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<detail::SpMat> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw SolverError("walk generator factorization failed");
  const detail::Vec x = ldlt.solve(rhs);
  ScalarField2D out = prize;
  auto v = out.values();
  for (std::size_t k = 0; k < node.size(); ++k) v[node[k]] = x[static_cast<Eigen::Index>(k)];
  return out;
}

GameReport validate_game_vs_pde(const GameConfig& cfg, const std::vector<std::pair<int, int>>& probes) {
  const ScalarField2D pde = walk_expectation_pde(cfg);
  const Grid2D& g = pde.grid();
  GameReport rep;
  long censored = 0, total = 0;
  for (auto [i, j] : probes) {
    const WalkEstimate est = simulate_walk(cfg, i, j);
    GameProbeRow row;
    row.px = g.x(i);
    row.py = g.y(j);
    row.mc_mean = est.mean;
    row.mc_se = est.std_error;
    row.pde_value = pde(i, j);
    row.censored = est.censored;
    const double diff = est.mean - row.pde_value;
    if (est.std_error > 0.0) {
      row.z = diff / est.std_error;
    } else {
      row.z = std::abs(diff) <= 1e-12 * (1.0 + std::abs(row.pde_value)) ? 0.0
                                                                         : std::numeric_limits<double>::infinity();
    }
    if (std::abs(row.z) <= 3.0) ++rep.within_3se;
    censored += est.censored;
    total += est.samples;
    rep.rows.push_back(row);
  }
  rep.censored_fraction = total > 0 ? static_cast<double>(censored) / static_cast<double>(total) : 0.0;
  return rep;
}

std::vector<std::pair<int, int>> default_probes(const Grid2D& g) {
  std::vector<std::pair<int, int>> out;
  const double fx[5] = {0.25, 0.4, 0.5, 0.6, 0.75};
  const double fy[2] = {0.35, 0.65};
  for (double y : fy) {
    for (double x : fx) {
      out.emplace_back(static_cast<int>(std::lround(x * (g.nx - 1))), static_cast<int>(std::lround(y * (g.ny - 1))));
    }
  }
  return out;
}

}  // namespace fblab
