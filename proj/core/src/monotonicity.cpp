#include "fblab/monotonicity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fblab/errors.hpp"
#include "fblab/interpolation.hpp"
#include "fblab/operators.hpp"
#include "fblab/parallel.hpp"

namespace fblab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

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

// 4-point Gauss-Legendre on panels no wider than `width`.
template <class F>
double integrate_panels(F&& f, double a, double b, double width) {
  if (!(b > a)) return 0.0;
  static constexpr std::array<double, 4> x{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                           0.8611363115940526};
  static constexpr std::array<double, 4> w{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                           0.3478548451374538};
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  const double len = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * len;
    for (int q = 0; q < 4; ++q) acc += w[q] * f(mid + 0.5 * len * x[q]);
  }
  return acc * 0.5 * len;
}

double ring_boundary_group(const PolarRing& ring) {
  const double r = ring.r;
  std::vector<double> s(ring.size());
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const double u = ring.u[k], ur = ring.u_r[k], ut = ring.u_theta[k], utr = ring.u_thetar[k], lap = ring.lap[k];
    s[k] = lap * ur / (2 * r * r) - 5 * ur * ur / (2 * r * r * r) - lap * u / (r * r * r) +
           6 * u * ur / std::pow(r, 4) + ut * utr / std::pow(r, 4) - 4 * u * u / std::pow(r, 5) -
           3 * ut * ut / (2 * std::pow(r, 5));
  }
  return ring_integral(ring, s);
}

double dissipation_density(const PolarRing& ring, DissipationVariant variant) {
  const double r = ring.r;
  std::vector<double> s(ring.size());
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const double second = variant == DissipationVariant::derivation ? ring.u_theta[k] : ring.u_r[k];
    const double a = ring.u_thetar[k] / r - 2 * second / (r * r);
    const double b = ring.u_rr[k] - 3 * ring.u_r[k] / r + 4 * ring.u[k] / (r * r);
    s[k] = a * a + b * b;
  }
  return ring_integral(ring, s) / (r * r);
}

}  // namespace

const char* to_string(DissipationVariant v) {
  return v == DissipationVariant::derivation ? "derivation" : "printed";
}

WeissContext::WeissContext(const ScalarField2D& u, double eps, const BumpProfile& bump, int n_theta)
    : d_(u), eps_(eps), n_theta_(n_theta) {
  if (!(eps > 0.0) || eps > 1.0) throw ParameterError("epsilon must lie in (0, 1]");
  lap_sq_ = nodewise(u, [&](int i, int j) { return d_.lap.defined(i, j) ? d_.lap(i, j) * d_.lap(i, j) : kNaN; });
  bulk_ = nodewise(u, [&](int i, int j) {
    return d_.lap.defined(i, j) ? d_.lap(i, j) * d_.lap(i, j) + bump.big_beta_eps(u(i, j), eps) : kNaN;
  });
  beta_u_ = nodewise(u, [&](int i, int j) { return u.defined(i, j) ? bump.beta_eps(u(i, j), eps) * u(i, j) : kNaN; });
}

PolarRing WeissContext::ring(Point2 center, double r) const { return polar_ring_sample(d_, center, r, n_theta_); }

double WeissContext::bulk_integral(Point2 center, double r) const { return disc_integral(bulk_, center, r); }

double WeissContext::lap_sq_integral(Point2 center, double r) const { return disc_integral(lap_sq_, center, r); }

double WeissContext::beta_u_integral(Point2 center, double r) const { return disc_integral(beta_u_, center, r); }

WeissComponents weiss_components(const WeissContext& ctx, Point2 center, double r) {
  const PolarRing ring = ctx.ring(center, r);
  const std::size_t n = ring.size();
  std::vector<double> lur(n), lurr(n), lu(n), w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = ring.u[k], ur = ring.u_r[k], ut = ring.u_theta[k], utr = ring.u_thetar[k];
    lur[k] = ring.lap[k] * ur;
    lurr[k] = ring.lap[k] * ring.u_rr[k];
    lu[k] = ring.lap[k] * u;
    w[k] = 5 * ur * ur / (2 * r * r * r) - 6 * u * ur / std::pow(r, 4) + 4 * u * u / std::pow(r, 5) -
           ut * utr / std::pow(r, 4) + 3 * ut * ut / (2 * std::pow(r, 5));
  }
  WeissComponents c;
  c.T = ring_integral(ring, lur) / (r * r);
  c.D = ctx.bulk_integral(center, r) / (r * r);
  c.R = ctx.lap_sq_integral(center, r) / (r * r * r) - ring_integral(ring, lurr) / (r * r);
  c.V = ring_integral(ring, lu) / (r * r * r);
  c.W = ring_integral(ring, w);
  return c;
}

WeissComponents weiss_components(const ScalarField2D& u, double eps, Point2 center, double r) {
  return weiss_components(WeissContext(u, eps), center, r);
}

double history_floor(const WeissContext& ctx) { return 3.0 * ctx.h(); }

namespace {

double history_piece(const WeissContext& ctx, Point2 center, double a, double b) {
  return integrate_panels([&](double rho) { return ctx.beta_u_integral(center, rho) / (rho * rho * rho); }, a, b,
                          ctx.h());
}

WeissEnergy energy_with_history(const WeissContext& ctx, Point2 center, double r, double history_integral) {
  WeissEnergy e;
  e.r = r;
  const PolarRing ring = ctx.ring(center, r);
  e.boundary = ring_boundary_group(ring);
  e.bulk = ctx.bulk_integral(center, r) / (4 * r * r);
  e.history_integral = history_integral;
  e.history = -0.5 * history_integral;
  e.E = e.boundary + e.bulk + e.history;
  e.components = weiss_components(ctx, center, r);
  return e;
}

}  // namespace

WeissEnergy weiss_energy(const WeissContext& ctx, Point2 center, double r) {
  const double r0 = history_floor(ctx);
  return energy_with_history(ctx, center, r, history_piece(ctx, center, r0, r));
}

WeissEnergy weiss_energy(const ScalarField2D& u, double eps, Point2 center, double r) {
  return weiss_energy(WeissContext(u, eps), center, r);
}

double dissipation(const WeissContext& ctx, Point2 center, double r1, double r2, DissipationVariant variant) {
  if (!(r2 > r1)) throw ParameterError("dissipation needs r1 < r2");
  return integrate_panels([&](double r) { return dissipation_density(ctx.ring(center, r), variant); }, r1, r2,
                          ctx.h());
}

double dissipation(const ScalarField2D& u, Point2 center, double r1, double r2, DissipationVariant variant) {
  return dissipation(WeissContext(u, 1.0), center, r1, r2, variant);
}

std::vector<double> geometric_radii(double r_min, double r_max, int count) {
  if (count < 2) throw ParameterError("radius ladder needs at least two radii");
  if (!(r_min > 0.0) || !(r_max > r_min)) throw ParameterError("radius ladder needs 0 < r_min < r_max");
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) r[static_cast<std::size_t>(k)] = r_min * std::pow(r_max / r_min, double(k) / (count - 1));
  r.back() = r_max;
  return r;
}

WeissReport monotonicity_check(const WeissContext& ctx, Point2 center, const std::vector<double>& radii,
                               DissipationVariant variant, double tol_factor, double center_tol) {
  if (radii.empty()) throw ParameterError("no radii given");
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] > radii[k - 1])) throw ParameterError("radii must increase strictly");
  }
  WeissReport rep;
  rep.center = center;
  rep.variant = variant;
  rep.radii = radii;
  rep.monotone_tol_factor = tol_factor;

  const FieldDerivatives& d = ctx.derivatives();
  rep.center_value = interpolate(d.u, center);
  rep.center_gradient = std::hypot(interpolate(d.grad.x, center), interpolate(d.grad.y, center));
  if (std::abs(rep.center_value) > center_tol) {
    std::ostringstream msg;
    msg << "u(center) = " << rep.center_value << " is not zero";
    rep.warnings.push_back(msg.str());
  }
  if (rep.center_gradient > center_tol) {
    std::ostringstream msg;
    msg << "|grad u(center)| = " << rep.center_gradient << " is not zero";
    rep.warnings.push_back(msg.str());
  }

  // History: prefix sums over the sorted ladder, pieces computed independently.
  const double r0 = history_floor(ctx);
  if (radii.front() < r0) throw ResolutionError("smallest radius is below the history floor 3h");
  const std::size_t n = radii.size();
  std::vector<double> pieces(n);
  parallel_for(n, [&](std::size_t k) {
    pieces[k] = history_piece(ctx, center, k == 0 ? r0 : radii[k - 1], radii[k]);
  });
  std::vector<double> hist(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) hist[k] = acc += pieces[k];
  rep.history_truncation = 0.5 * ctx.beta_u_integral(center, r0) / (2.0 * r0 * r0);

  rep.energies.resize(n);
  parallel_for(n, [&](std::size_t k) { rep.energies[k] = energy_with_history(ctx, center, radii[k], hist[k]); });

  const DissipationVariant other =
      variant == DissipationVariant::derivation ? DissipationVariant::printed : DissipationVariant::derivation;
  const std::size_t m = n - 1;
  rep.dE.resize(m);
  rep.dissipation.resize(m);
  rep.dissipation_other_variant.resize(m);
  rep.identity_defect.resize(m);
  parallel_for(m, [&](std::size_t k) {
    rep.dissipation[k] = dissipation(ctx, center, radii[k], radii[k + 1], variant);
    rep.dissipation_other_variant[k] = dissipation(ctx, center, radii[k], radii[k + 1], other);
  });
  rep.monotone = true;
  for (std::size_t k = 0; k < m; ++k) {
    rep.dE[k] = rep.energies[k + 1].E - rep.energies[k].E;
    rep.identity_defect[k] = std::abs(rep.dE[k] - rep.dissipation[k]);
    if (rep.dE[k] < -tol_factor * (1.0 + std::abs(rep.energies[k + 1].E))) rep.monotone = false;
  }
  return rep;
}

WeissReport monotonicity_check(const ScalarField2D& u, double eps, Point2 center, const std::vector<double>& radii,
                               DissipationVariant variant) {
  return monotonicity_check(WeissContext(u, eps), center, radii, variant);
}

double limit_weiss_energy(const ScalarField2D& u, Point2 center, double r) {
  const FieldDerivatives d(u);
  const PolarRing ring = polar_ring_sample(d, center, r);
  const ScalarField2D lap_sq =
      nodewise(u, [&](int i, int j) { return d.lap.defined(i, j) ? d.lap(i, j) * d.lap(i, j) : kNaN; });
  const double bulk = disc_integral(lap_sq, center, r) + positivity_measure(u, Ball{center, r});
  return ring_boundary_group(ring) + bulk / (4 * r * r);
}

StrongConvergenceReport strong_convergence_diag(const std::vector<ScalarField2D>& fields,
                                                const std::vector<double>& eps, const Ball& ball) {
  if (fields.size() != eps.size()) throw DimensionError("one epsilon per field expected");
  StrongConvergenceReport rep;
  rep.eps = eps;
  const std::size_t n = fields.size();
  std::vector<ScalarField2D> laps;
  laps.reserve(n);
  for (const auto& f : fields) laps.push_back(laplacian(f));
  for (std::size_t k = 0; k < n; ++k) {
    const ScalarField2D& L = laps[k];
    const Grid2D& g = L.grid();
    const ScalarField2D sq = nodewise(L, [&](int i, int j) { return L.defined(i, j) ? L(i, j) * L(i, j) : kNaN; });
    rep.lap_l2.push_back(std::sqrt(disc_integral(sq, ball.center, ball.radius)));
    double sup = 0.0;
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const double dx = g.x(i) - ball.center.x, dy = g.y(j) - ball.center.y;
        if (dx * dx + dy * dy <= ball.radius * ball.radius && L.defined(i, j)) sup = std::max(sup, std::abs(L(i, j)));
      }
    }
    rep.lap_sup.push_back(sup);
    rep.transition.push_back(transition_measure(fields[k], eps[k], ball));
  }
  rep.lap_l2_distance.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!(laps[a].grid() == laps[b].grid())) throw DimensionError("fields live on different grids");
      const ScalarField2D sq = nodewise(laps[a], [&](int i, int j) {
        if (!laps[a].defined(i, j) || !laps[b].defined(i, j)) return kNaN;
        const double d = laps[a](i, j) - laps[b](i, j);
        return d * d;
      });
      rep.lap_l2_distance[a][b] = rep.lap_l2_distance[b][a] = std::sqrt(disc_integral(sq, ball.center, ball.radius));
    }
  }
  return rep;
}

namespace {

// Sign-change nodes at distance >= margin from the grid edge; score picks one.
template <class Score>
Point2 pick_free_boundary_node(const ScalarField2D& u, double margin, Score score) {
  const Gradient gr = gradient(u);
  const Grid2D& g = u.grid();
  double best = std::numeric_limits<double>::infinity();
  Point2 out;
  for (int j = 1; j + 1 < g.ny; ++j) {
    for (int i = 1; i + 1 < g.nx; ++i) {
      const double x = g.x(i), y = g.y(j);
      if (x - g.x(0) < margin || g.x(g.nx - 1) - x < margin || y - g.y(0) < margin || g.y(g.ny - 1) - y < margin) {
        continue;
      }
      if (!gr.x.defined(i, j)) continue;
      const bool pos = u(i, j) > 0.0;
      bool change = false;
      for (auto [di, dj] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
        change = change || ((u(i + di, j + dj) > 0.0) != pos);
      }
      if (!change) continue;
      const double s = score(Point2{x, y}, std::hypot(gr.x(i, j), gr.y(i, j)));
      if (s < best) {
        best = s;
        out = {x, y};
      }
    }
  }
  if (!std::isfinite(best)) throw DomainError("no sign change of u away from the edge");
  return out;
}

}  // namespace

Point2 detect_free_boundary_point(const ScalarField2D& u, double margin) {
  return pick_free_boundary_node(u, margin, [](Point2, double grad) { return grad; });
}

Point2 detect_free_boundary_point(const ScalarField2D& u, double margin, Point2 toward) {
  return pick_free_boundary_node(u, margin, [toward](Point2 p, double) {
    return std::hypot(p.x - toward.x, p.y - toward.y);
  });
}

}  // namespace fblab
