#include "fblab/operators.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "fblab/errors.hpp"

namespace fblab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScalarField2D undefined_like(const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  return ScalarField2D(g, std::vector<double>(g.size(), kNaN), std::vector<NodeKind>(g.size(), NodeKind::exterior));
}

void require_any(const ScalarField2D& out, const char* what) {
  for (NodeKind k : out.mask()) {
    if (k != NodeKind::exterior) return;
  }
  throw DimensionError(std::string(what) + ": no node has a complete stencil");
}

void put(ScalarField2D& out, int i, int j, double v) {
  out(i, j) = v;
  out.set_kind(i, j, NodeKind::interior);
}

// Second derivative along one axis at (i, j); central when possible,
// otherwise the one-sided (2, -5, 4, -1) stencil.
std::optional<double> second_along(const ScalarField2D& f, int i, int j, int di, int dj, double h2) {
  const bool lo = f.defined(i - di, j - dj);
  const bool hi = f.defined(i + di, j + dj);
  if (lo && hi) return (f(i - di, j - dj) - 2.0 * f(i, j) + f(i + di, j + dj)) / h2;
  const int s = hi ? 1 : -1;
  for (int k = 1; k <= 3; ++k) {
    if (!f.defined(i + s * k * di, j + s * k * dj)) return std::nullopt;
  }
  return (2.0 * f(i, j) - 5.0 * f(i + s * di, j + s * dj) + 4.0 * f(i + 2 * s * di, j + 2 * s * dj) -
          f(i + 3 * s * di, j + 3 * s * dj)) /
         h2;
}

}  // namespace

ScalarField2D laplacian(const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  const double h2 = g.h * g.h;
  ScalarField2D out = undefined_like(f);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!f.defined(i, j) || !f.defined(i - 1, j) || !f.defined(i + 1, j) || !f.defined(i, j - 1) ||
          !f.defined(i, j + 1)) {
        continue;
      }
      put(out, i, j, (f(i - 1, j) + f(i + 1, j) + f(i, j - 1) + f(i, j + 1) - 4.0 * f(i, j)) / h2);
    }
  }
  require_any(out, "laplacian");
  return out;
}

ScalarField2D bilaplacian(const ScalarField2D& f) {
  ScalarField2D out = laplacian(laplacian(f));
  return out;
}

Gradient gradient(const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  Gradient out{undefined_like(f), undefined_like(f)};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!f.defined(i, j) || !f.defined(i - 1, j) || !f.defined(i + 1, j) || !f.defined(i, j - 1) ||
          !f.defined(i, j + 1)) {
        continue;
      }
      put(out.x, i, j, (f(i + 1, j) - f(i - 1, j)) / (2.0 * g.h));
      put(out.y, i, j, (f(i, j + 1) - f(i, j - 1)) / (2.0 * g.h));
    }
  }
  require_any(out.x, "gradient");
  return out;
}

Hessian hessian(const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  const double h2 = g.h * g.h;
  Hessian out{undefined_like(f), undefined_like(f), undefined_like(f)};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      bool ok = true;
      for (int dj = -1; dj <= 1 && ok; ++dj) {
        for (int di = -1; di <= 1 && ok; ++di) ok = f.defined(i + di, j + dj);
      }
      if (!ok) continue;
      put(out.xx, i, j, (f(i - 1, j) - 2.0 * f(i, j) + f(i + 1, j)) / h2);
      put(out.yy, i, j, (f(i, j - 1) - 2.0 * f(i, j) + f(i, j + 1)) / h2);
      put(out.xy, i, j, (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1)) / (4.0 * h2));
    }
  }
  require_any(out.xx, "hessian");
  return out;
}

ScalarField2D laplacian_one_sided(const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  const double h2 = g.h * g.h;
  ScalarField2D out = undefined_like(f);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!f.defined(i, j)) continue;
      const auto fxx = second_along(f, i, j, 1, 0, h2);
      const auto fyy = second_along(f, i, j, 0, 1, h2);
      if (fxx && fyy) put(out, i, j, *fxx + *fyy);
    }
  }
  require_any(out, "laplacian_one_sided");
  return out;
}

}  // namespace fblab
