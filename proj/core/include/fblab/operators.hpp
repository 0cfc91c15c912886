#pragma once

#include "fblab/grid.hpp"

namespace fblab {

struct Gradient {
  ScalarField2D x;
  ScalarField2D y;
};

struct Hessian {
  ScalarField2D xx;
  ScalarField2D xy;
  ScalarField2D yy;
};

/// Five-point Laplacian at every node whose four neighbours are defined.
ScalarField2D laplacian(const ScalarField2D& f);

/// Thirteen-point biLaplacian, the composition of two five-point Laplacians.
ScalarField2D bilaplacian(const ScalarField2D& f);

/// Central first differences where both neighbours along each axis exist.
Gradient gradient(const ScalarField2D& f);

/// Central second differences; the mixed term needs the four diagonal nodes.
Hessian hessian(const ScalarField2D& f);

/// Laplacian that also covers boundary nodes with one-sided second-order
/// stencils. Diagnostics only: the solver never uses it.
ScalarField2D laplacian_one_sided(const ScalarField2D& f);

}  // namespace fblab
