#include "fblab/grid.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "fblab/errors.hpp"

namespace fblab {

Grid2D::Grid2D(int nx_, int ny_, double h_, Point2 origin_) : nx(nx_), ny(ny_), h(h_), origin(origin_) {
  if (nx < 5 || ny < 5) {
    throw DimensionError("grid needs at least 5 nodes per axis, got " + std::to_string(nx) + "x" +
                         std::to_string(ny));
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("grid spacing must be positive");
}

Grid2D Grid2D::square(int n, double lo, double hi) {
  if (n < 5) throw DimensionError("grid needs at least 5 nodes per axis");
  return Grid2D(n, n, (hi - lo) / (n - 1), Point2{lo, lo});
}

ScalarField2D::ScalarField2D(Grid2D grid, std::vector<double> values, std::vector<NodeKind> mask)
    : grid_(grid), values_(std::move(values)), mask_(std::move(mask)) {
  if (values_.size() != grid_.size() || mask_.size() != grid_.size()) {
    throw DimensionError("field storage does not match grid size");
  }
}

ScalarField2D ScalarField2D::rectangle(const Grid2D& grid, const std::function<double(double, double)>& f) {
  std::vector<double> v(grid.size());
  std::vector<NodeKind> m(grid.size(), NodeKind::interior);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const bool edge = i == 0 || j == 0 || i == grid.nx - 1 || j == grid.ny - 1;
      m[grid.index(i, j)] = edge ? NodeKind::boundary : NodeKind::interior;
      v[grid.index(i, j)] = f(grid.x(i), grid.y(j));
    }
  }
  return ScalarField2D(grid, std::move(v), std::move(m));
}

ScalarField2D ScalarField2D::rectangle(const Grid2D& grid, double value) {
  return rectangle(grid, [value](double, double) { return value; });
}

ScalarField2D ScalarField2D::disc(const Grid2D& grid, Point2 center, double radius,
                                  const std::function<double(double, double)>& f) {
  auto inside = [&](int i, int j) {
    if (!grid.contains(i, j)) return false;
    const double dx = grid.x(i) - center.x;
    const double dy = grid.y(j) - center.y;
    return dx * dx + dy * dy <= radius * radius;
  };
  std::vector<double> v(grid.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<NodeKind> m(grid.size(), NodeKind::exterior);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (!inside(i, j)) continue;
      const bool full = inside(i - 1, j) && inside(i + 1, j) && inside(i, j - 1) && inside(i, j + 1);
      m[grid.index(i, j)] = full ? NodeKind::interior : NodeKind::boundary;
      v[grid.index(i, j)] = f(grid.x(i), grid.y(j));
    }
  }
  return ScalarField2D(grid, std::move(v), std::move(m));
}

ScalarField2D ScalarField2D::with_values(const std::function<double(double, double)>& f) const {
  ScalarField2D out = *this;
  for (int j = 0; j < grid_.ny; ++j) {
    for (int i = 0; i < grid_.nx; ++i) {
      if (defined(i, j)) out(i, j) = f(grid_.x(i), grid_.y(j));
    }
  }
  return out;
}

double max_abs_diff(const ScalarField2D& a, const ScalarField2D& b) {
  if (!(a.grid() == b.grid())) throw DimensionError("fields live on different grids");
  double m = 0.0;
  for (int j = 0; j < a.grid().ny; ++j) {
    for (int i = 0; i < a.grid().nx; ++i) {
      if (a.defined(i, j) && b.defined(i, j)) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    }
  }
  return m;
}

double max_abs(const ScalarField2D& f) {
  double m = 0.0;
  for (int j = 0; j < f.grid().ny; ++j) {
    for (int i = 0; i < f.grid().nx; ++i) {
      if (f.defined(i, j)) m = std::max(m, std::abs(f(i, j)));
    }
  }
  return m;
}

void write_field(std::ostream& os, const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  os << std::setprecision(17);
  os << g.nx << ' ' << g.ny << ' ' << g.h << ' ' << g.origin.x << ' ' << g.origin.y << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) os << ' ';
      if (f.defined(i, j)) {
        os << f(i, j);
      } else {
        os << "nan";
      }
    }
    os << '\n';
  }
}

ScalarField2D read_field(std::istream& is) {
  int nx = 0, ny = 0;
  double h = 0.0, ox = 0.0, oy = 0.0;
  if (!(is >> nx >> ny >> h >> ox >> oy)) throw DimensionError("field file: malformed header");
  Grid2D g(nx, ny, h, Point2{ox, oy});
  std::vector<double> v(g.size());
  std::string tok;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!(is >> tok)) throw DimensionError("field file: expected " + std::to_string(g.size()) + " values");
    if (tok == "nan" || tok == "NaN") {
      v[k] = std::numeric_limits<double>::quiet_NaN();
    } else {
      v[k] = std::stod(tok);
    }
  }
  std::vector<NodeKind> m(g.size(), NodeKind::exterior);
  auto has = [&](int i, int j) { return g.contains(i, j) && !std::isnan(v[g.index(i, j)]); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!has(i, j)) continue;
      const bool full = has(i - 1, j) && has(i + 1, j) && has(i, j - 1) && has(i, j + 1);
      m[g.index(i, j)] = full ? NodeKind::interior : NodeKind::boundary;
    }
  }
  return ScalarField2D(g, std::move(v), std::move(m));
}

}  // namespace fblab
