#include "fblab/polar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fblab/errors.hpp"
#include "fblab/interpolation.hpp"

namespace fblab {
namespace {

void check_ring_args(const Grid2D& g, double r, int n_theta) {
  if (n_theta < 16 || n_theta % 2 != 0) {
    throw ParameterError("ring sample count must be even and >= 16, got " + std::to_string(n_theta));
  }
  if (!(r > 0.0)) throw ParameterError("ring radius must be positive");
  if (r < 3.0 * g.h * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "ring radius " << r << " below the resolution floor 3h = " << 3.0 * g.h;
    throw ResolutionError(msg.str());
  }
}

bool has_5x5_block(const ScalarField2D& f, int i, int j) {
  for (int b = -2; b <= 2; ++b) {
    for (int a = -2; a <= 2; ++a) {
      if (!f.defined(i + a, j + b)) return false;
    }
  }
  return true;
}

// Fourth-order central differences wherever the 5x5 block exists; the
// second-order values stay in place near the edge of the data.
void upgrade_to_fourth_order(const ScalarField2D& f, FieldDerivatives& d) {
  const Grid2D& g = f.grid();
  const double h = g.h;
  auto dx = [&](int i, int j) { return (-f(i + 2, j) + 8 * f(i + 1, j) - 8 * f(i - 1, j) + f(i - 2, j)) / (12 * h); };
  auto dy = [&](int i, int j) { return (-f(i, j + 2) + 8 * f(i, j + 1) - 8 * f(i, j - 1) + f(i, j - 2)) / (12 * h); };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!has_5x5_block(f, i, j)) continue;
      d.grad.x(i, j) = dx(i, j);
      d.grad.y(i, j) = dy(i, j);
      d.hess.xx(i, j) = (-f(i + 2, j) + 16 * f(i + 1, j) - 30 * f(i, j) + 16 * f(i - 1, j) - f(i - 2, j)) / (12 * h * h);
      d.hess.yy(i, j) = (-f(i, j + 2) + 16 * f(i, j + 1) - 30 * f(i, j) + 16 * f(i, j - 1) - f(i, j - 2)) / (12 * h * h);
      d.hess.xy(i, j) = (-dy(i + 2, j) + 8 * dy(i + 1, j) - 8 * dy(i - 1, j) + dy(i - 2, j)) / (12 * h);
      d.lap(i, j) = d.hess.xx(i, j) + d.hess.yy(i, j);
    }
  }
}

}  // namespace

FieldDerivatives::FieldDerivatives(const ScalarField2D& f)
    : u(f), grad(gradient(f)), hess(hessian(f)), lap(laplacian(f)) {
  upgrade_to_fourth_order(f, *this);
}

bool ring_fits(const FieldDerivatives& d, Point2 center, double r, int n_theta) {
  for (int k = 0; k < n_theta; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n_theta;
    const Point2 p{center.x + r * std::cos(t), center.y + r * std::sin(t)};
    // The Hessian fields have the smallest support of all sampled fields.
    if (!interpolable(d.hess.xy, p) || !interpolable(d.lap, p)) return false;
  }
  return true;
}

PolarRing polar_ring_sample(const FieldDerivatives& d, Point2 center, double r, int n_theta) {
  check_ring_args(d.u.grid(), r, n_theta);
  if (!ring_fits(d, center, r, n_theta)) {
    std::ostringstream msg;
    msg << "ring of radius " << r << " around (" << center.x << ", " << center.y
        << ") leaves the region where derivative fields are defined";
    throw GeometryError(msg.str());
  }
  PolarRing ring;
  ring.center = center;
  ring.r = r;
  const auto n = static_cast<std::size_t>(n_theta);
  for (auto* v : {&ring.theta, &ring.u, &ring.u_r, &ring.u_theta, &ring.u_rr, &ring.u_thetar, &ring.lap}) {
    v->resize(n);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / n_theta;
    const double c = std::cos(t);
    const double s = std::sin(t);
    const Point2 p{center.x + r * c, center.y + r * s};
    const double u = interpolate(d.u, p);
    const double ux = interpolate(d.grad.x, p);
    const double uy = interpolate(d.grad.y, p);
    const double uxx = interpolate(d.hess.xx, p);
    const double uxy = interpolate(d.hess.xy, p);
    const double uyy = interpolate(d.hess.yy, p);
    ring.theta[k] = t;
    ring.u[k] = u;
    ring.u_r[k] = c * ux + s * uy;
    ring.u_theta[k] = r * (-s * ux + c * uy);
    ring.u_rr[k] = c * c * uxx + 2.0 * c * s * uxy + s * s * uyy;
    // d/dr of r * (-sin u_x + cos u_y)
    ring.u_thetar[k] = (-s * ux + c * uy) + r * (c * s * (uyy - uxx) + (c * c - s * s) * uxy);
    ring.lap[k] = interpolate(d.lap, p);
  }
  return ring;
}

PolarRing polar_ring_sample(const ScalarField2D& f, Point2 center, double r, int n_theta) {
  check_ring_args(f.grid(), r, n_theta);
  return polar_ring_sample(FieldDerivatives(f), center, r, n_theta);
}

double ring_integral(double r, std::span<const double> integrand) {
  if (integrand.empty()) throw ParameterError("ring integrand has no samples");
  double acc = 0.0;
  for (double v : integrand) acc += v;
  return acc * 2.0 * std::numbers::pi * r / static_cast<double>(integrand.size());
}

double ring_integral(const PolarRing& ring, std::span<const double> integrand) {
  if (integrand.size() != ring.size()) throw DimensionError("integrand length differs from ring sample count");
  return ring_integral(ring.r, integrand);
}

double disc_integral(const ScalarField2D& f, Point2 center, double r, int subsamples) {
  if (!(r > 0.0)) throw ParameterError("disc radius must be positive");
  if (subsamples < 1) throw ParameterError("subsamples must be positive");
  const Grid2D& g = f.grid();
  const double h = g.h;
  const double r2 = r * r;
  const int i_lo = static_cast<int>(std::floor((center.x - r - g.origin.x) / h));
  const int i_hi = static_cast<int>(std::ceil((center.x + r - g.origin.x) / h));
  const int j_lo = static_cast<int>(std::floor((center.y - r - g.origin.y) / h));
  const int j_hi = static_cast<int>(std::ceil((center.y + r - g.origin.y) / h));
  const double sub = h / subsamples;
  double acc = 0.0;
  for (int j = j_lo; j < j_hi; ++j) {
    for (int i = i_lo; i < i_hi; ++i) {
      const double x0 = g.x(i), x1 = x0 + h, y0 = g.y(j), y1 = y0 + h;
      // nearest and farthest points of the cell from the centre
      const double nx = std::clamp(center.x, x0, x1) - center.x;
      const double ny = std::clamp(center.y, y0, y1) - center.y;
      if (nx * nx + ny * ny >= r2) continue;
      if (!f.defined(i, j) || !f.defined(i + 1, j) || !f.defined(i, j + 1) || !f.defined(i + 1, j + 1)) {
        std::ostringstream msg;
        msg << "disc of radius " << r << " around (" << center.x << ", " << center.y
            << ") covers cells with undefined values";
        throw GeometryError(msg.str());
      }
      const double f00 = f(i, j), f10 = f(i + 1, j), f01 = f(i, j + 1), f11 = f(i + 1, j + 1);
      const double fx = std::max(std::abs(x0 - center.x), std::abs(x1 - center.x));
      const double fy = std::max(std::abs(y0 - center.y), std::abs(y1 - center.y));
      if (fx * fx + fy * fy <= r2) {
        acc += h * h * 0.25 * (f00 + f10 + f01 + f11);
        continue;
      }
      double part = 0.0;
      for (int b = 0; b < subsamples; ++b) {
        const double ty = (b + 0.5) / subsamples;
        const double py = y0 + ty * h - center.y;
        for (int a = 0; a < subsamples; ++a) {
          const double tx = (a + 0.5) / subsamples;
          const double px = x0 + tx * h - center.x;
          if (px * px + py * py >= r2) continue;
          part += (1 - tx) * (1 - ty) * f00 + tx * (1 - ty) * f10 + (1 - tx) * ty * f01 + tx * ty * f11;
        }
      }
      acc += part * sub * sub;
    }
  }
  return acc;
}

}  // namespace fblab
