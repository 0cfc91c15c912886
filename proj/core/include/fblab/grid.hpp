#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fblab {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform square-cell node grid. Node (i, j) sits at origin + h * (i, j).
struct Grid2D {
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  Point2 origin;

  /// Throws DimensionError / ParameterError when the invariants fail.
  Grid2D(int nx, int ny, double h, Point2 origin);
  Grid2D() = default;

  /// Grid with n x n nodes spanning [lo, hi]^2.
  static Grid2D square(int n, double lo, double hi);

  double x(int i) const { return origin.x + h * i; }
  double y(int j) const { return origin.y + h * j; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }

  friend bool operator==(const Grid2D& a, const Grid2D& b) {
    return a.nx == b.nx && a.ny == b.ny && a.h == b.h && a.origin.x == b.origin.x &&
           a.origin.y == b.origin.y;
  }
};

enum class NodeKind : std::uint8_t { interior, boundary, exterior };

/// Node values plus an interior/boundary/exterior mask.
///
/// Derived fields (operator outputs) use `interior` for nodes where the
/// stencil produced a value and `exterior` (value NaN) elsewhere.
class ScalarField2D {
 public:
  ScalarField2D() = default;
  ScalarField2D(Grid2D grid, std::vector<double> values, std::vector<NodeKind> mask);

  /// Rectangle domain: outer ring of nodes is boundary, the rest interior.
  static ScalarField2D rectangle(const Grid2D& grid, const std::function<double(double, double)>& f);
  static ScalarField2D rectangle(const Grid2D& grid, double value);

  /// Disc domain: nodes inside the closed disc are boundary when one of their
  /// four neighbours falls outside, interior otherwise.
  static ScalarField2D disc(const Grid2D& grid, Point2 center, double radius,
                            const std::function<double(double, double)>& f);

  const Grid2D& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::span<const NodeKind> mask() const { return mask_; }

  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  NodeKind kind(int i, int j) const { return mask_[grid_.index(i, j)]; }
  void set_kind(int i, int j, NodeKind k) { mask_[grid_.index(i, j)] = k; }

  /// True when (i, j) is on the grid and carries a value.
  bool defined(int i, int j) const {
    return grid_.contains(i, j) && mask_[grid_.index(i, j)] != NodeKind::exterior;
  }

  /// Same grid and mask, values from f at node coordinates on defined nodes.
  ScalarField2D with_values(const std::function<double(double, double)>& f) const;

  /// Maximum of |a - b| over nodes defined in both fields.
  friend double max_abs_diff(const ScalarField2D& a, const ScalarField2D& b);

 private:
  Grid2D grid_;
  std::vector<double> values_;
  std::vector<NodeKind> mask_;
};

double max_abs_diff(const ScalarField2D& a, const ScalarField2D& b);

/// Max |value| over defined nodes.
double max_abs(const ScalarField2D& f);

/// Plain-text matrix format: header `nx ny h ox oy`, then ny rows of nx
/// values with 17 significant digits. Undefined nodes are written as `nan`.
void write_field(std::ostream& os, const ScalarField2D& f);
ScalarField2D read_field(std::istream& is);

}  // namespace fblab
