#include "fblab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fblab/errors.hpp"
#include "fblab/operators.hpp"
#include "fblab/parallel.hpp"
#include "fblab/polar.hpp"

namespace fblab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScalarField2D difference(const ScalarField2D& a, const ScalarField2D& b) {
  if (!(a.grid() == b.grid())) throw DimensionError("fields live on different grids");
  const Grid2D& g = a.grid();
  std::vector<double> v(g.size(), kNaN);
  std::vector<NodeKind> m(g.size(), NodeKind::exterior);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!a.defined(i, j) || !b.defined(i, j)) continue;
      v[g.index(i, j)] = a(i, j) - b(i, j);
      m[g.index(i, j)] = a.kind(i, j) == NodeKind::boundary || b.kind(i, j) == NodeKind::boundary
                             ? NodeKind::boundary
                             : NodeKind::interior;
    }
  }
  return ScalarField2D(g, std::move(v), std::move(m));
}

// Field of values f(i, j) on nodes where every input is defined.
template <class F>
ScalarField2D nodewise(const ScalarField2D& like, F&& f) {
  const Grid2D& g = like.grid();
  std::vector<double> v(g.size(), kNaN);
  std::vector<NodeKind> m(g.size(), NodeKind::exterior);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = f(i, j);
      if (std::isnan(x)) continue;
      v[g.index(i, j)] = x;
      m[g.index(i, j)] = NodeKind::interior;
    }
  }
  return ScalarField2D(g, std::move(v), std::move(m));
}

}  // namespace

double w2p_distance(const ScalarField2D& a, const ScalarField2D& b, double p) {
  if (!(p >= 1.0)) throw ParameterError("W^{2,p} exponent must be >= 1");
  const ScalarField2D d = difference(a, b);
  const Gradient gr = gradient(d);
  const Hessian he = hessian(d);
  const Grid2D& g = d.grid();
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!he.xx.defined(i, j)) continue;
      const double gn = std::hypot(gr.x(i, j), gr.y(i, j));
      const double hn = std::sqrt(he.xx(i, j) * he.xx(i, j) + 2.0 * he.xy(i, j) * he.xy(i, j) +
                                  he.yy(i, j) * he.yy(i, j));
      acc += std::pow(std::abs(d(i, j)), p) + std::pow(gn, p) + std::pow(hn, p);
    }
  }
  return std::pow(acc * g.h * g.h, 1.0 / p);
}

double bmo_seminorm(const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  const double side0 = std::max(g.nx - 1, g.ny - 1) * g.h;
  double best = 0.0;
  std::vector<double> vals;
  for (int level = 0;; ++level) {
    const double s = side0 / std::ldexp(1.0, level);
    if (s < 4.0 * g.h * (1.0 - 1e-12)) break;
    const int count = 1 << level;
    for (int by = 0; by < count; ++by) {
      for (int bx = 0; bx < count; ++bx) {
        const double xlo = g.origin.x + bx * s, ylo = g.origin.y + by * s;
        const bool last_x = bx == count - 1, last_y = by == count - 1;
        vals.clear();
        for (int j = 0; j < g.ny; ++j) {
          const double y = g.y(j);
          if (y < ylo - 1e-12 * s || (last_y ? y > ylo + s + 1e-12 * s : y >= ylo + s - 1e-12 * s)) continue;
          for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i);
            if (x < xlo - 1e-12 * s || (last_x ? x > xlo + s + 1e-12 * s : x >= xlo + s - 1e-12 * s)) continue;
            if (f.defined(i, j) && std::isfinite(f(i, j))) vals.push_back(f(i, j));
          }
        }
        if (vals.size() < 2) continue;
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double dev = 0.0;
        for (double v : vals) dev += std::abs(v - mean);
        best = std::max(best, dev / static_cast<double>(vals.size()));
      }
    }
  }
  return best;
}

double laplacian_l2_distance(const ScalarField2D& a, const ScalarField2D& b) {
  const ScalarField2D la = laplacian(a);
  const ScalarField2D lb = laplacian(b);
  if (!(la.grid() == lb.grid())) throw DimensionError("fields live on different grids");
  const Grid2D& g = la.grid();
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!la.defined(i, j) || !lb.defined(i, j)) continue;
      const double d = la(i, j) - lb(i, j);
      acc += d * d;
    }
  }
  return std::sqrt(acc * g.h * g.h);
}

ConvergenceReport eps_sweep(const NavierProblem& tmpl, const std::vector<double>& eps_list) {
  ConvergenceReport rep;
  rep.rows.resize(eps_list.size());
  rep.fields.resize(eps_list.size());
  parallel_for(eps_list.size(), [&](std::size_t k) {
    SweepRow& row = rep.rows[k];
    row.eps = eps_list[k];
    try {
      NavierProblem p = tmpl;
      p.eps = eps_list[k];
      SolveResult r = solve_navier(p);
      row.ok = true;
      row.iterations = r.report.iterations;
      row.residual = r.report.final_residual;
      row.J_eps = r.report.energy;
      row.J_limit = energy_limit(r.u);
      row.transition_area = r.report.transition_area;
      row.bmo = bmo_seminorm(laplacian(r.u));
      rep.fields[k] = std::move(r.u);
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    }
  });
  const ScalarField2D* prev = nullptr;
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    SweepRow& row = rep.rows[k];
    row.sup_diff = row.grad_sup_diff = row.w22_diff = row.w24_diff = row.lap_l2_diff = kNaN;
    if (!row.ok) continue;
    const ScalarField2D& cur = rep.fields[k];
    if (prev) {
      row.sup_diff = max_abs_diff(cur, *prev);
      const Gradient gc = gradient(cur), gp = gradient(*prev);
      row.grad_sup_diff = std::max(max_abs_diff(gc.x, gp.x), max_abs_diff(gc.y, gp.y));
      row.w22_diff = w2p_distance(cur, *prev, 2.0);
      row.w24_diff = w2p_distance(cur, *prev, 4.0);
      row.lap_l2_diff = laplacian_l2_distance(cur, *prev);
    }
    prev = &cur;
  }
  return rep;
}

bool strictly_decreasing(const std::vector<double>& v) {
  double last = std::numeric_limits<double>::infinity();
  int seen = 0;
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    if (!(x < last)) return false;
    last = x;
    ++seen;
  }
  return seen >= 2;
}

DecayReport decay_estimate_check(const ScalarField2D& u, double eps, Point2 x0, double R, double R0) {
  if (!(eps > 0.0) || eps > 1.0) throw ParameterError("epsilon must lie in (0, 1]");
  if (!(R > 0.0) || !(R0 > 0.0)) throw ParameterError("radii must be positive");
  if (!(R < R0 / 4.0)) {
    std::ostringstream msg;
    msg << "R = " << R << " must be below R0/4 = " << R0 / 4.0;
    throw ParameterError(msg.str());
  }
  DecayReport rep;
  rep.x0 = x0;
  rep.R = R;
  rep.R0 = R0;
  const Grid2D& g = u.grid();

  const double R4 = 4.0 * R;
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double dx = g.x(i) - x0.x, dy = g.y(j) - x0.y;
      if (dx * dx + dy * dy > R4 * R4) continue;
      if (!u.defined(i, j)) throw GeometryError("B_4R leaves the domain");
      m = std::min(m, u(i, j));
    }
  }
  if (!std::isfinite(m)) throw ResolutionError("B_4R contains no grid node");
  rep.m = m;

  const Gradient gr = gradient(u);
  const Hessian he = hessian(u);
  const ScalarField2D g2 = nodewise(u, [&](int i, int j) {
    return gr.x.defined(i, j) ? gr.x(i, j) * gr.x(i, j) + gr.y(i, j) * gr.y(i, j) : kNaN;
  });
  const ScalarField2D h2 = nodewise(u, [&](int i, int j) {
    return he.xx.defined(i, j)
               ? he.xx(i, j) * he.xx(i, j) + 2.0 * he.xy(i, j) * he.xy(i, j) + he.yy(i, j) * he.yy(i, j)
               : kNaN;
  });
  const ScalarField2D dev = nodewise(u, [&](int i, int j) { return u.defined(i, j) ? u(i, j) - m : kNaN; });
  const ScalarField2D dev2 = nodewise(u, [&](int i, int j) {
    return u.defined(i, j) ? (u(i, j) - m) * (u(i, j) - m) : kNaN;
  });

  rep.grad_integral = disc_integral(g2, x0, R);
  rep.hess_integral = disc_integral(h2, x0, R);
  rep.lhs = rep.grad_integral / std::pow(R, 4) + rep.hess_integral / (R * R);
  rep.var_integral = disc_integral(dev2, x0, R4);
  rep.mean_integral = disc_integral(dev, x0, R4);
  rep.c_hat = disc_integral(laplacian(u), x0, R0) / (std::numbers::pi * R0 * R0);

  const double t1 = rep.var_integral / std::pow(R, 6);
  const double t2 = rep.mean_integral / std::pow(R, 4);
  rep.fitted_C = t1 > 0.0 ? std::max(0.0, (rep.lhs - rep.c_hat * t2) / t1) : 0.0;
  rep.fitted_C_signed = t1 > 0.0 ? std::max(0.0, (rep.lhs + rep.c_hat * t2) / t1) : 0.0;
  return rep;
}

}  // namespace fblab
