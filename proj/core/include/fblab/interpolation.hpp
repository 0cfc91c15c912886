#pragma once

#include <optional>

#include "fblab/grid.hpp"

namespace fblab {

/// Tensor-product cubic Lagrange interpolation on the 4x4 node block around p.
/// Exact on bicubic polynomials; returns nullopt if any of the 16 nodes is
/// undefined or off the grid.
std::optional<double> try_interpolate(const ScalarField2D& f, Point2 p);

/// As try_interpolate, throwing GeometryError when the stencil is incomplete.
double interpolate(const ScalarField2D& f, Point2 p);

/// True when try_interpolate would succeed at p.
bool interpolable(const ScalarField2D& f, Point2 p);

}  // namespace fblab
