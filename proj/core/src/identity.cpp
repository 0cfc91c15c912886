#include "fblab/identity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fblab/errors.hpp"
#include "fblab/operators.hpp"
#include "fblab/parallel.hpp"

namespace fblab {

double Bump1D::value(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(-1.0 / (t * (1.0 - t)));
}

double Bump1D::d1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double q = t * (1.0 - t);
  return (1.0 - 2.0 * t) / (q * q) * value(t);
}

double Bump1D::d2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double q = t * (1.0 - t);
  const double s = 1.0 - 2.0 * t;
  const double g1 = s / (q * q);
  const double g2 = -2.0 / (q * q) - 2.0 * s * s / (q * q * q);
  return (g2 + g1 * g1) * value(t);
}

TestVectorField::TestVectorField(Box support, std::array<double, 2> amplitude) : box_(support), amp_(amplitude) {
  if (!(box_.xhi > box_.xlo) || !(box_.yhi > box_.ylo)) throw ParameterError("bump support box is empty");
}

TestVectorField::Jet TestVectorField::eval(Point2 p) const {
  Jet jet;
  const double lx = box_.xhi - box_.xlo, ly = box_.yhi - box_.ylo;
  const double tx = (p.x - box_.xlo) / lx, ty = (p.y - box_.ylo) / ly;
  const double bx = Bump1D::value(tx), by = Bump1D::value(ty);
  if (bx == 0.0 || by == 0.0) return jet;
  const double bx1 = Bump1D::d1(tx) / lx, by1 = Bump1D::d1(ty) / ly;
  const double bx2 = Bump1D::d2(tx) / (lx * lx), by2 = Bump1D::d2(ty) / (ly * ly);
  for (int i = 0; i < 2; ++i) {
    jet.value[i] = amp_[i] * bx * by;
    jet.jac[i][0] = amp_[i] * bx1 * by;
    jet.jac[i][1] = amp_[i] * bx * by1;
    jet.lap[i] = amp_[i] * (bx2 * by + bx * by2);
  }
  return jet;
}

TestVectorField TestVectorField::scaled(double lambda) const {
  return TestVectorField(box_, {lambda * amp_[0], lambda * amp_[1]});
}

TestVectorField make_bump_field(const Box& support, std::array<double, 2> amplitude) {
  return TestVectorField(support, amplitude);
}

IdentityResult identity_residual(const ScalarField2D& u, double eps, const TestVectorField& phi,
                                 const BumpProfile& bump) {
  const Grid2D& g = u.grid();
  const Box& box = phi.support();
  const Gradient gr = gradient(u);
  const Hessian he = hessian(u);
  IdentityResult res;
  if (phi.amplitude()[0] == 0.0 && phi.amplitude()[1] == 0.0) return res;
  const int i_lo = std::max(0, static_cast<int>(std::floor((box.xlo - g.origin.x) / g.h)));
  const int i_hi = std::min(g.nx - 1, static_cast<int>(std::ceil((box.xhi - g.origin.x) / g.h)));
  const int j_lo = std::max(0, static_cast<int>(std::floor((box.ylo - g.origin.y) / g.h)));
  const int j_hi = std::min(g.ny - 1, static_cast<int>(std::ceil((box.yhi - g.origin.y) / g.h)));
  if (box.xlo < g.x(0) || box.xhi > g.x(g.nx - 1) || box.ylo < g.y(0) || box.yhi > g.y(g.ny - 1)) {
    throw GeometryError("bump support leaves the grid");
  }
  auto bulk = [&](int i, int j) {
    const double lap = he.xx(i, j) + he.yy(i, j);
    return lap * lap + bump.big_beta_eps(u(i, j), eps);
  };
  // int div phi = 0, so any constant can be taken off the rhs integrand
  double shift = 0.0;
  {
    const int ic = static_cast<int>(std::lround((0.5 * (box.xlo + box.xhi) - g.origin.x) / g.h));
    const int jc = static_cast<int>(std::lround((0.5 * (box.ylo + box.yhi) - g.origin.y) / g.h));
    if (ic >= 0 && ic < g.nx && jc >= 0 && jc < g.ny && he.xx.defined(ic, jc)) shift = bulk(ic, jc);
  }
  double lhs = 0.0, rhs = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    for (int i = i_lo; i <= i_hi; ++i) {
      const Point2 p{g.x(i), g.y(j)};
      if (!box.contains(p)) continue;
      if (!he.xx.defined(i, j)) {
        std::ostringstream msg;
        msg << "Hessian undefined at (" << p.x << ", " << p.y << ") inside the bump support";
        throw GeometryError(msg.str());
      }
      const auto jet = phi.eval(p);
      const double uxx = he.xx(i, j), uxy = he.xy(i, j), uyy = he.yy(i, j);
      const double lap = uxx + uyy;
      // tr(D^2u Dphi) with (Dphi)_ij = d_j phi^i
      const double tr = uxx * jet.jac[0][0] + uxy * (jet.jac[0][1] + jet.jac[1][0]) + uyy * jet.jac[1][1];
      const double gl = gr.x(i, j) * jet.lap[0] + gr.y(i, j) * jet.lap[1];
      lhs += 2.0 * (2.0 * tr + gl) * lap;
      rhs += jet.div() * (bulk(i, j) - shift);
    }
  }
  res.lhs = lhs * g.h * g.h;
  res.rhs = rhs * g.h * g.h;
  res.residual = std::abs(res.lhs - res.rhs) / (1.0 + std::abs(res.lhs) + std::abs(res.rhs));
  const double scale = std::max(std::abs(res.lhs), std::abs(res.rhs));
  res.relative_defect = scale > 0.0 ? std::abs(res.lhs - res.rhs) / scale : 0.0;
  return res;
}

std::vector<TestVectorField> random_bump_fields(const Grid2D& grid, int n_fields, std::uint64_t seed) {
  if (n_fields < 0) throw ParameterError("field count must be nonnegative");
  const double x0 = grid.x(0), x1 = grid.x(grid.nx - 1);
  const double y0 = grid.y(0), y1 = grid.y(grid.ny - 1);
  const double lx = x1 - x0, ly = y1 - y0;
  std::vector<TestVectorField> out;
  out.reserve(static_cast<std::size_t>(n_fields));
  std::mt19937_64 rng(seed);
  auto uni = [&rng] { return static_cast<double>(rng() >> 11) * 0x1p-53; };
  for (int k = 0; k < n_fields; ++k) {
    const double wx = (0.25 + 0.3 * uni()) * lx, wy = (0.25 + 0.3 * uni()) * ly;
    const double cx = x0 + 0.1 * lx + wx / 2 + uni() * (0.8 * lx - wx);
    const double cy = y0 + 0.1 * ly + wy / 2 + uni() * (0.8 * ly - wy);
    const double ax = 2.0 * uni() - 1.0, ay = 2.0 * uni() - 1.0;
    out.emplace_back(Box{cx - wx / 2, cx + wx / 2, cy - wy / 2, cy + wy / 2}, std::array<double, 2>{ax, ay});
  }
  return out;
}

IdentitySuiteReport identity_suite(const ScalarField2D& u, double eps, int n_fields, std::uint64_t seed,
                                   const BumpProfile& bump) {
  const auto fields = random_bump_fields(u.grid(), n_fields, seed);
  IdentitySuiteReport rep;
  rep.rows.resize(fields.size());
  parallel_for(fields.size(), [&](std::size_t k) {
    const IdentityResult r = identity_residual(u, eps, fields[k], bump);
    rep.rows[k] = {static_cast<int>(k), fields[k].support(), r.lhs, r.rhs, r.residual, r.relative_defect};
  });
  if (rep.rows.empty()) return rep;
  std::vector<double> res;
  for (const auto& row : rep.rows) {
    res.push_back(row.residual);
    rep.max_relative_defect = std::max(rep.max_relative_defect, row.relative_defect);
  }
  std::sort(res.begin(), res.end());
  rep.max_residual = res.back();
  const std::size_t n = res.size();
  rep.median_residual = n % 2 ? res[n / 2] : 0.5 * (res[n / 2 - 1] + res[n / 2]);
  return rep;
}

}  // namespace fblab
