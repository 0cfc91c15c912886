#include "fblab/interpolation.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "fblab/errors.hpp"

namespace fblab {
namespace {

// Lagrange weights for nodes at -1, 0, 1, 2 evaluated at t in [0, 1].
std::array<double, 4> cubic_weights(double t) {
  return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
          -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
}

struct Cell {
  int i0;
  int j0;
  double tx;
  double ty;
};

Cell locate(const Grid2D& g, Point2 p) {
  const double sx = (p.x - g.origin.x) / g.h;
  const double sy = (p.y - g.origin.y) / g.h;
  int i0 = static_cast<int>(std::floor(sx));
  int j0 = static_cast<int>(std::floor(sy));
  // Points on the last node line use the cell to their left/below.
  if (i0 == g.nx - 1) --i0;
  if (j0 == g.ny - 1) --j0;
  return {i0, j0, sx - i0, sy - j0};
}

bool stencil_ok(const ScalarField2D& f, const Cell& c) {
  for (int dj = -1; dj <= 2; ++dj) {
    for (int di = -1; di <= 2; ++di) {
      if (!f.defined(c.i0 + di, c.j0 + dj)) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<double> try_interpolate(const ScalarField2D& f, Point2 p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return std::nullopt;
  const Cell c = locate(f.grid(), p);
  if (!stencil_ok(f, c)) return std::nullopt;
  const auto wx = cubic_weights(c.tx);
  const auto wy = cubic_weights(c.ty);
  double acc = 0.0;
  for (int dj = 0; dj < 4; ++dj) {
    double row = 0.0;
    for (int di = 0; di < 4; ++di) row += wx[di] * f(c.i0 - 1 + di, c.j0 - 1 + dj);
    acc += wy[dj] * row;
  }
  return acc;
}

double interpolate(const ScalarField2D& f, Point2 p) {
  if (auto v = try_interpolate(f, p)) return *v;
  std::ostringstream msg;
  msg << "interpolation stencil at (" << p.x << ", " << p.y << ") leaves the defined region";
  throw GeometryError(msg.str());
}

bool interpolable(const ScalarField2D& f, Point2 p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  return stencil_ok(f, locate(f.grid(), p));
}

}  // namespace fblab
