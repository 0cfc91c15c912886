#pragma once

#include <span>
#include <vector>

#include "fblab/grid.hpp"
#include "fblab/operators.hpp"

namespace fblab {

/// A field together with the difference-derivative fields that ring sampling
/// interpolates: fourth-order central differences where a 5x5 node block is
/// available, second-order ones elsewhere. Built once per field and shared
/// read-only.
struct FieldDerivatives {
  ScalarField2D u;
  Gradient grad;
  Hessian hess;
  ScalarField2D lap;

  explicit FieldDerivatives(const ScalarField2D& f);
};

/// Samples of u and its polar derivatives on the circle |x - center| = r at
/// n equispaced angles theta_k = 2 pi k / n.
struct PolarRing {
  Point2 center;
  double r = 0.0;
  std::vector<double> theta;
  std::vector<double> u;
  std::vector<double> u_r;
  std::vector<double> u_theta;
  std::vector<double> u_rr;
  std::vector<double> u_thetar;
  std::vector<double> lap;

  std::size_t size() const { return theta.size(); }
};

inline constexpr int kDefaultRingSamples = 256;

/// Interpolates the value and derivative fields on the ring and assembles
/// polar derivatives by the chain rule.
///
/// Requires an even sample count of at least 16 and r >= 3h; throws
/// ParameterError / ResolutionError / GeometryError otherwise.
PolarRing polar_ring_sample(const FieldDerivatives& d, Point2 center, double r, int n_theta = kDefaultRingSamples);
PolarRing polar_ring_sample(const ScalarField2D& f, Point2 center, double r, int n_theta = kDefaultRingSamples);

/// True when every interpolation stencil the ring needs is available.
bool ring_fits(const FieldDerivatives& d, Point2 center, double r, int n_theta = kDefaultRingSamples);

/// Periodic trapezoid rule on the ring: (2 pi r / n) * sum of samples.
double ring_integral(const PolarRing& ring, std::span<const double> integrand);

/// Same rule for any per-angle samples on a circle of radius r.
double ring_integral(double r, std::span<const double> integrand);

/// Integral of f over the disc B_r(center): trapezoid on cells inside the
/// disc, bilinear sub-sampling (subsamples^2 points) on cut cells.
double disc_integral(const ScalarField2D& f, Point2 center, double r, int subsamples = 16);

}  // namespace fblab
