#include "fblab/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fblab/operators.hpp"
#include "navier_system.hpp"

namespace fblab {

namespace detail {

NavierSystem::NavierSystem(const ScalarField2D& domain) : grid_(domain.grid()) {
  const Grid2D& g = grid_;
  unknown_of_.assign(g.size(), -1);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (domain.kind(i, j) != NodeKind::interior) continue;
      if (!domain.defined(i - 1, j) || !domain.defined(i + 1, j) || !domain.defined(i, j - 1) ||
          !domain.defined(i, j + 1)) {
        throw GeometryError("interior node without four defined neighbours");
      }
      unknown_of_[g.index(i, j)] = static_cast<int>(node_of_.size());
      node_of_.push_back(g.index(i, j));
    }
  }
  if (node_of_.empty()) throw DimensionError("domain has no interior nodes");
  const double ih2 = 1.0 / (g.h * g.h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * node_of_.size());
  for (std::size_t k = 0; k < node_of_.size(); ++k) {
    const int i = static_cast<int>(node_of_[k] % g.nx);
    const int j = static_cast<int>(node_of_[k] / g.nx);
    const int row = static_cast<int>(k);
    trip.emplace_back(row, row, -4.0 * ih2);
    for (auto [di, dj] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
      const int col = unknown_of_[g.index(i + di, j + dj)];
      if (col >= 0) trip.emplace_back(row, col, ih2);
    }
  }
  L_.resize(unknowns(), unknowns());
  L_.setFromTriplets(trip.begin(), trip.end());
}

Vec NavierSystem::boundary_term(const ScalarField2D& f) const {
  const Grid2D& g = grid_;
  const double ih2 = 1.0 / (g.h * g.h);
  Vec b = Vec::Zero(unknowns());
  for (std::size_t k = 0; k < node_of_.size(); ++k) {
    const int i = static_cast<int>(node_of_[k] % g.nx);
    const int j = static_cast<int>(node_of_[k] / g.nx);
    for (auto [di, dj] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
      if (unknown_of_[g.index(i + di, j + dj)] < 0) b[static_cast<Eigen::Index>(k)] += f(i + di, j + dj) * ih2;
    }
  }
  return b;
}

Vec NavierSystem::gather(const ScalarField2D& f) const {
  Vec x(unknowns());
  const auto v = f.values();
  for (std::size_t k = 0; k < node_of_.size(); ++k) x[static_cast<Eigen::Index>(k)] = v[node_of_[k]];
  return x;
}

void NavierSystem::scatter(const Vec& x, ScalarField2D& f) const {
  auto v = f.values();
  for (std::size_t k = 0; k < node_of_.size(); ++k) v[node_of_[k]] = x[static_cast<Eigen::Index>(k)];
}

ScalarField2D with_boundary_of(const ScalarField2D& initial, const ScalarField2D& data) {
  if (!(initial.grid() == data.grid())) throw DimensionError("initial guess and boundary data grids differ");
  const Grid2D& g = data.grid();
  ScalarField2D u(g, std::vector<double>(initial.values().begin(), initial.values().end()),
                  std::vector<NodeKind>(data.mask().begin(), data.mask().end()));
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const NodeKind k = data.kind(i, j);
      if (k == NodeKind::boundary) {
        u(i, j) = data(i, j);
      } else if (k == NodeKind::exterior) {
        u(i, j) = std::numeric_limits<double>::quiet_NaN();
      } else if (!std::isfinite(u(i, j))) {
        throw ParameterError("initial guess is not finite on interior nodes");
      }
    }
  }
  return u;
}

namespace {

struct Evaluator {
  const NavierSystem& sys;
  const Vec& b;
  const BumpProfile& bump;
  double eps;
  bool beta_off;

  double functional(const Vec& x) const {
    const Vec w = sys.L() * x + b;
    double acc = w.squaredNorm();
    if (!beta_off) {
      for (Eigen::Index k = 0; k < x.size(); ++k) acc += bump.big_beta_eps(x[k], eps);
    }
    return acc * sys.grid().h * sys.grid().h;
  }

  SpMat jacobian_diag(const Vec& x) const {
    SpMat D(x.size(), x.size());
    D.reserve(Eigen::VectorXi::Constant(x.size(), 1));
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      D.insert(k, k) = beta_off ? 0.0 : bump.beta_eps_prime(x[k], eps);
    }
    return D;
  }
};

void finish_report(SolveReport& rep, const ScalarField2D& u, const NavierProblem& p) {
  rep.energy = energy(u, p.eps, p.bump());
  rep.transition_area = transition_measure(u, p.eps);
}

}  // namespace

SolveResult newton_navier(const NavierProblem& p, const ScalarField2D& initial, double scale, bool beta_off) {
  p.validate();
  NavierSystem sys(p.boundary_data);
  ScalarField2D u = with_boundary_of(initial, p.boundary_data);
  const Vec b = sys.boundary_term(u);
  const SpMat& L = sys.L();
  Vec x = sys.gather(u);
  Vec w = L * x + b;
  const Evaluator ev{sys, b, p.bump(), p.eps, beta_off};
  const SpMat J0 = 2.0 * (L * L);

  // Block residuals: r1 = L u + b - w, r2 = scale * (2 L w + beta_eps(u)).
  auto residuals = [&](const Vec& uu, const Vec& ww, Vec& r1, Vec& r2) {
    r1 = L * uu + b - ww;
    r2 = 2.0 * (L * ww);
    if (!beta_off) {
      for (Eigen::Index k = 0; k < uu.size(); ++k) r2[k] += p.bump().beta_eps(uu[k], p.eps);
    }
    r2 *= scale;
  };

  SolveReport rep;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  Vec best = x;
  double best_res = std::numeric_limits<double>::infinity();
  Vec r1, r2;
  residuals(x, w, r1, r2);
  for (int it = 1; it <= p.tol.max_iter; ++it) {
    const double res = std::max(r1.lpNorm<Eigen::Infinity>(), r2.lpNorm<Eigen::Infinity>());
    rep.trace.push_back({it, res, ev.functional(x)});
    rep.iterations = it;
    if (res < best_res) {
      best_res = res;
      best = x;
    }
    if (res <= p.tol.residual_tol) {
      rep.converged = true;
      break;
    }
    // Eliminating dw = L du + r1 leaves (2 L^2 + diag beta') du = -r2 / scale - 2 L r1.
    const SpMat J = J0 + ev.jacobian_diag(x);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) {
      throw SolverError("Newton Jacobian factorization failed at iteration " + std::to_string(it));
    }
    const Vec du = lu.solve(Vec(-r2 / scale - 2.0 * (L * r1)));
    const Vec dw = L * du + r1;
    const double merit = r1.squaredNorm() + r2.squaredNorm();
    double t = 1.0;
    for (;;) {
      const Vec xt = x + t * du;
      const Vec wt = w + t * dw;
      Vec s1, s2;
      residuals(xt, wt, s1, s2);
      if (s1.squaredNorm() + s2.squaredNorm() < merit) {
        x = xt;
        w = wt;
        r1 = std::move(s1);
        r2 = std::move(s2);
        break;
      }
      t *= 0.5;
      if (t < p.tol.damping_floor) {
        std::ostringstream msg;
        msg << "damped Newton step reached the floor " << p.tol.damping_floor << " at iteration " << it
            << " (residual " << res << ")";
        throw SolverError(msg.str());
      }
    }
    if (t < 1.0) {
      rep.notes.push_back("iteration " + std::to_string(it) + ": step damped to " + std::to_string(t));
    }
  }
  rep.final_residual = best_res;
  if (!rep.converged) {
    sys.scatter(best, u);
    finish_report(rep, u, p);
    std::ostringstream msg;
    msg << "Newton did not converge in " << p.tol.max_iter << " iterations (best residual " << best_res << ")";
    throw IterationError(msg.str(), u, rep);
  }
  sys.scatter(x, u);
  finish_report(rep, u, p);
  return {std::move(u), std::move(rep)};
}

}  // namespace detail

namespace {

template <class G>
double sample_cells(const ScalarField2D& u, G&& g, int subsamples, const Ball* ball) {
  if (subsamples < 1) throw ParameterError("subsamples must be positive");
  const Grid2D& gr = u.grid();
  const double sub = gr.h / subsamples;
  double acc = 0.0;
  for (int j = 0; j + 1 < gr.ny; ++j) {
    for (int i = 0; i + 1 < gr.nx; ++i) {
      if (!u.defined(i, j) || !u.defined(i + 1, j) || !u.defined(i, j + 1) || !u.defined(i + 1, j + 1)) continue;
      const double x0 = gr.x(i), y0 = gr.y(j);
      if (ball) {
        const double nx = std::clamp(ball->center.x, x0, x0 + gr.h) - ball->center.x;
        const double ny = std::clamp(ball->center.y, y0, y0 + gr.h) - ball->center.y;
        if (nx * nx + ny * ny >= ball->radius * ball->radius) continue;
      }
      const double f00 = u(i, j), f10 = u(i + 1, j), f01 = u(i, j + 1), f11 = u(i + 1, j + 1);
      double part = 0.0;
      for (int bq = 0; bq < subsamples; ++bq) {
        const double ty = (bq + 0.5) / subsamples;
        for (int aq = 0; aq < subsamples; ++aq) {
          const double tx = (aq + 0.5) / subsamples;
          if (ball) {
            const double px = x0 + tx * gr.h - ball->center.x;
            const double py = y0 + ty * gr.h - ball->center.y;
            if (px * px + py * py >= ball->radius * ball->radius) continue;
          }
          part += g((1 - tx) * (1 - ty) * f00 + tx * (1 - ty) * f10 + (1 - tx) * ty * f01 + tx * ty * f11);
        }
      }
      acc += part * sub * sub;
    }
  }
  return acc;
}

double laplacian_part(const ScalarField2D& u, BoundaryLaplacian bl) {
  const Grid2D& g = u.grid();
  ScalarField2D lap = bl == BoundaryLaplacian::one_sided ? laplacian_one_sided(u) : laplacian(u);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!u.defined(i, j)) continue;
      if (bl == BoundaryLaplacian::zero && u.kind(i, j) == NodeKind::boundary) {
        lap(i, j) = 0.0;
        lap.set_kind(i, j, NodeKind::interior);
      }
      if (!lap.defined(i, j) || !std::isfinite(u(i, j))) {
        std::ostringstream msg;
        msg << "Laplacian undefined at node (" << i << ", " << j << ")";
        throw DomainError(msg.str());
      }
    }
  }
  double acc = 0.0;
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      if (!u.defined(i, j) || !u.defined(i + 1, j) || !u.defined(i, j + 1) || !u.defined(i + 1, j + 1)) continue;
      const double a = lap(i, j), b = lap(i + 1, j), c = lap(i, j + 1), d = lap(i + 1, j + 1);
      acc += 0.25 * (a * a + b * b + c * c + d * d);
    }
  }
  return acc * g.h * g.h;
}

void check_eps(double eps) {
  if (!(eps > 0.0) || eps > 1.0) {
    std::ostringstream msg;
    msg << "epsilon must lie in (0, 1], got " << eps;
    throw ParameterError(msg.str());
  }
}

}  // namespace

NavierProblem::NavierProblem(ScalarField2D u0, double eps_, SolverTolerances tol_)
    : boundary_data(std::move(u0)),
      eps(eps_),
      forcing(std::shared_ptr<const BumpProfile>{}, &BumpProfile::standard()),
      tol(tol_) {}

void NavierProblem::validate() const {
  check_eps(eps);
  if (!forcing) throw ParameterError("forcing profile missing");
  if (!(tol.residual_tol > 0.0)) throw ParameterError("residual_tol must be positive");
  if (tol.max_iter < 1) throw ParameterError("max_iter must be at least 1");
  if (!(tol.damping_floor > 0.0) || tol.damping_floor > 1.0) throw ParameterError("damping floor must lie in (0, 1]");
  const Grid2D& g = boundary_data.grid();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (boundary_data.kind(i, j) == NodeKind::boundary && !std::isfinite(boundary_data(i, j))) {
        throw ParameterError("boundary data is not finite");
      }
    }
  }
}

double energy(const ScalarField2D& u, double eps, const BumpProfile& bump, BoundaryLaplacian bl, int subsamples) {
  check_eps(eps);
  const double lap = laplacian_part(u, bl);
  return lap + sample_cells(u, [&](double v) { return bump.big_beta_eps(v, eps); }, subsamples, nullptr);
}

double energy_limit(const ScalarField2D& u, BoundaryLaplacian bl, int subsamples) {
  const double lap = laplacian_part(u, bl);
  return lap + sample_cells(u, [](double v) { return v > 0.0 ? 1.0 : 0.0; }, subsamples, nullptr);
}

double transition_measure(const ScalarField2D& u, double eps, const Ball& ball, int subsamples) {
  check_eps(eps);
  if (!(ball.radius > 0.0)) throw ParameterError("ball radius must be positive");
  return sample_cells(u, [eps](double v) { return v > 0.0 && v <= eps ? 1.0 : 0.0; }, subsamples, &ball);
}

double transition_measure(const ScalarField2D& u, double eps, int subsamples) {
  check_eps(eps);
  return sample_cells(u, [eps](double v) { return v > 0.0 && v <= eps ? 1.0 : 0.0; }, subsamples, nullptr);
}

double positivity_measure(const ScalarField2D& u, const Ball& ball, int subsamples) {
  if (!(ball.radius > 0.0)) throw ParameterError("ball radius must be positive");
  return sample_cells(u, [](double v) { return v > 0.0 ? 1.0 : 0.0; }, subsamples, &ball);
}

namespace {

// Lap_h u on interior nodes, zero on boundary nodes.
ScalarField2D navier_w(const ScalarField2D& u) {
  const Grid2D& g = u.grid();
  ScalarField2D w = u;
  const double ih2 = 1.0 / (g.h * g.h);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const NodeKind k = u.kind(i, j);
      if (k == NodeKind::boundary) {
        w(i, j) = 0.0;
      } else if (k == NodeKind::interior) {
        if (!u.defined(i - 1, j) || !u.defined(i + 1, j) || !u.defined(i, j - 1) || !u.defined(i, j + 1)) {
          throw DomainError("interior node without four defined neighbours");
        }
        w(i, j) = (u(i - 1, j) + u(i + 1, j) + u(i, j - 1) + u(i, j + 1) - 4.0 * u(i, j)) * ih2;
      }
    }
  }
  return w;
}

}  // namespace

double navier_residual(const ScalarField2D& u, double eps, const BumpProfile& bump) {
  check_eps(eps);
  const ScalarField2D w = navier_w(u);
  const Grid2D& g = u.grid();
  const double ih2 = 1.0 / (g.h * g.h);
  double m = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (u.kind(i, j) != NodeKind::interior) continue;
      const double lw = (w(i - 1, j) + w(i + 1, j) + w(i, j - 1) + w(i, j + 1) - 4.0 * w(i, j)) * ih2;
      m = std::max(m, std::abs(2.0 * lw + bump.beta_eps(u(i, j), eps)));
    }
  }
  return m;
}

double discrete_functional(const ScalarField2D& u, double eps, const BumpProfile& bump) {
  check_eps(eps);
  const ScalarField2D w = navier_w(u);
  const Grid2D& g = u.grid();
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (u.kind(i, j) != NodeKind::interior) continue;
      acc += w(i, j) * w(i, j) + bump.big_beta_eps(u(i, j), eps);
    }
  }
  return acc * g.h * g.h;
}

NavierProblem quadratic_benchmark(int n, double eps, double offset, double lo, double hi) {
  const Grid2D g = Grid2D::square(n, lo, hi);
  return NavierProblem(ScalarField2D::rectangle(g, [offset](double x, double y) { return x * x + y * y - offset; }),
                       eps);
}

ScalarField2D default_initial_guess(const NavierProblem& p) {
  p.validate();
  const detail::NavierSystem sys(p.boundary_data);
  ScalarField2D u = detail::with_boundary_of(p.boundary_data.with_values([](double, double) { return 0.0; }),
                                             p.boundary_data);
  const detail::Vec b = sys.boundary_term(u);
  Eigen::SimplicialLDLT<detail::SpMat> ldlt(-sys.L());
  if (ldlt.info() != Eigen::Success) throw SolverError("Laplace factorization failed");
  sys.scatter(ldlt.solve(b), u);
  return u;
}

SolveResult solve_navier(const NavierProblem& p, const ScalarField2D& initial) {
  return detail::newton_navier(p, initial, 1.0, false);
}

SolveResult solve_navier(const NavierProblem& p) {
  p.validate();
  const Grid2D& g = p.boundary_data.grid();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (p.boundary_data.kind(i, j) != NodeKind::boundary) continue;
      lo = std::min(lo, p.boundary_data(i, j));
      hi = std::max(hi, p.boundary_data(i, j));
    }
  }
  if (lo == hi && p.bump().beta_eps(lo, p.eps) == 0.0) {
    // L annihilates constants exactly; evaluating it in floating point would only add roundoff.
    const double c = lo;
    SolveResult r{p.boundary_data.with_values([c](double, double) { return c; }), {}};
    r.report.converged = true;
    r.report.trace.push_back({0, 0.0, discrete_functional(r.u, p.eps, p.bump())});
    r.report.notes.push_back("constant data with beta_eps(c) = 0: exact root, no iteration");
    detail::finish_report(r.report, r.u, p);
    return r;
  }
  return solve_navier(p, default_initial_guess(p));
}

SolveResult minimize_energy(const NavierProblem& p, const ScalarField2D& initial, DescentOptions opt) {
  using detail::SpMat;
  using detail::Vec;
  p.validate();
  if (opt.max_iter < 1) throw ParameterError("max_iter must be at least 1");
  const detail::NavierSystem sys(p.boundary_data);
  ScalarField2D u = detail::with_boundary_of(initial, p.boundary_data);
  const Vec b = sys.boundary_term(u);
  Vec x = sys.gather(u);
  const Grid2D& g = sys.grid();
  const double h2 = g.h * g.h;
  const BumpProfile& bump = p.bump();

  // Free unknowns; with freeze_layer the interior nodes touching the boundary stay put.
  std::vector<int> free_idx;
  for (int k = 0; k < sys.unknowns(); ++k) {
    const std::size_t n = sys.node_of()[static_cast<std::size_t>(k)];
    const int i = static_cast<int>(n % g.nx), j = static_cast<int>(n / g.nx);
    bool adjacent = false;
    for (auto [di, dj] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
      adjacent = adjacent || sys.unknown_of()[g.index(i + di, j + dj)] < 0;
    }
    if (!(opt.freeze_layer && adjacent)) free_idx.push_back(k);
  }
  if (free_idx.empty()) throw DimensionError("no free unknowns after freezing the boundary layer");
  const auto nf = static_cast<Eigen::Index>(free_idx.size());
  std::vector<Eigen::Triplet<double>> sel;
  for (Eigen::Index r = 0; r < nf; ++r) sel.emplace_back(r, free_idx[static_cast<std::size_t>(r)], 1.0);
  SpMat S(nf, sys.unknowns());
  S.setFromTriplets(sel.begin(), sel.end());
  const SpMat P = S * (2.0 * (sys.L() * sys.L())) * S.transpose();
  Eigen::SimplicialLLT<SpMat> llt(P);
  if (llt.info() != Eigen::Success) throw SolverError("preconditioner factorization failed");

  auto functional = [&](const Vec& v) {
    const Vec w = sys.L() * v + b;
    double acc = w.squaredNorm();
    for (Eigen::Index k = 0; k < v.size(); ++k) acc += bump.big_beta_eps(v[k], p.eps);
    return acc * h2;
  };
  auto gradient = [&](const Vec& v) {
    const Vec w = sys.L() * v + b;
    Vec G = 2.0 * (sys.L() * w);
    for (Eigen::Index k = 0; k < v.size(); ++k) G[k] += bump.beta_eps(v[k], p.eps);
    return Vec(S * G);
  };

  SolveReport rep;
  double J = functional(x);
  double t = 1.0;
  for (int it = 1;; ++it) {
    const Vec G = gradient(x);
    const double gmax = G.lpNorm<Eigen::Infinity>();
    rep.trace.push_back({it, gmax, J});
    rep.iterations = it;
    rep.final_residual = gmax;
    if (gmax <= p.tol.residual_tol) {
      rep.converged = true;
      break;
    }
    if (it > opt.max_iter) break;
    const Vec d = -llt.solve(G);
    const double slope = h2 * G.dot(d);
    t = std::min(1.0, 2.0 * t);
    double Jt = J;
    Vec xt;
    bool accepted = false;
    while (t >= 1e-14) {
      xt = x + S.transpose() * (t * d);
      Jt = functional(xt);
      if (Jt <= J + 1e-4 * t * slope && Jt < J) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      rep.converged = true;
      rep.notes.push_back("line search found no decrease at iteration " + std::to_string(it));
      break;
    }
    const double decrease = J - Jt;
    x = std::move(xt);
    J = Jt;
    if (decrease < opt.min_relative_decrease * std::max(std::abs(J), std::numeric_limits<double>::min())) {
      rep.trace.push_back({it + 1, gradient(x).lpNorm<Eigen::Infinity>(), J});
      rep.final_residual = rep.trace.back().residual;
      rep.converged = true;
      rep.notes.push_back("relative energy decrease below threshold");
      break;
    }
  }
  sys.scatter(x, u);
  rep.energy = energy(u, p.eps, bump);
  rep.transition_area = transition_measure(u, p.eps);
  if (!rep.converged) {
    std::ostringstream msg;
    msg << "descent did not converge in " << opt.max_iter << " iterations (gradient " << rep.final_residual << ")";
    throw IterationError(msg.str(), u, rep);
  }
  return {std::move(u), std::move(rep)};
}

}  // namespace fblab
