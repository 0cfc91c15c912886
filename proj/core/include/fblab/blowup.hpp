#pragma once

#include <string>
#include <vector>

#include "fblab/grid.hpp"
#include "fblab/identity.hpp"

namespace fblab {

/// v(x) = u(center + r x) / r^2 sampled on `reference` by cubic interpolation.
/// Throws GeometryError when a sample point lacks an interpolation stencil.
ScalarField2D rescale(const ScalarField2D& u, Point2 center, double r, const Grid2D& reference);
/// Reference window [-1, 1]^2 with 65 x 65 nodes.
ScalarField2D rescale(const ScalarField2D& u, Point2 center, double r);

/// Two-plane profile (alpha/2) s_+^2 + (gamma/2) s_-^2, s = direction . (x - center).
struct DetachmentFit {
  Point2 center;
  Point2 direction{1.0, 0.0};
  double alpha = 0.0;
  double gamma = 0.0;
  /// ||u - profile|| / ||u|| over the window nodes.
  double fit_residual = 0.0;
  double defect_equal = 0.0;  // |alpha - gamma|
  double defect_mixed = 0.0;  // |alpha^2 - gamma^2 - 1|
  bool zero_profile = false;
};

/// Least-squares fit over the nodes of the disc of radius `window` around
/// `center`. The direction starts at the principal axis of the window-mean of
/// (D^2 u)^2 and is refined jointly with (alpha, gamma) by Gauss-Newton. The
/// orientation is chosen with alpha >= gamma.
DetachmentFit fit_quadratic_detachment(const ScalarField2D& u, Point2 center, double window);

enum class DetachmentLabel { both_positive, both_negative, mixed, forbidden, zero, unclassified };

const char* to_string(DetachmentLabel label);

struct DetachmentClass {
  DetachmentLabel label = DetachmentLabel::unclassified;
  /// Sign case before the constraint test; equals label unless unclassified.
  DetachmentLabel candidate = DetachmentLabel::unclassified;
  /// Distance to the candidate's constraint set.
  double defect = 0.0;
};

/// Mirror-invariant: (alpha, gamma) and (gamma, alpha) get the same label.
DetachmentClass classify_detachment(double alpha, double gamma, double tol = 1e-2);

/// Scalar test function psi = amplitude * b(tx) * b(ty) on a box.
class ScalarBump {
 public:
  ScalarBump(Box support, double amplitude);
  double value(Point2 p) const;
  /// d psi / dx1
  double d1(Point2 p) const;
  const Box& support() const { return box_; }
  double amplitude() const { return amp_; }

 private:
  Box box_;
  double amp_;
};

/// Fixed bump straddling {x1 = 0} with unit trace: int psi(0, x2) dx2 = 1.
ScalarBump standard_detachment_bump();

/// alpha^2 int_{x1>0} psi_1 + gamma^2 int_{x1<0} psi_1 - int_{u>0} psi_1 for the
/// two-plane profile, each integral by nested adaptive Gauss-Kronrod.
double detachment_identity_residual(double alpha, double gamma, const ScalarBump& psi);

/// Max over radii of oint |x . grad u - 2u| / (oint (|u| + r |grad u|) + 1e-300),
/// x measured from center. Zero for u = 0.
double homogeneity_defect(const ScalarField2D& u, Point2 center, const std::vector<double>& radii);

struct BlowupStep {
  double r = 0.0;
  DetachmentFit fit;
  DetachmentClass cls;
  /// max |v_r - v_{previous r}| on the reference window; NaN on the first row.
  double cauchy_gap = 0.0;
  double sup = 0.0;
};

/// Rescales at each radius, fits the profile on the unit disc of the
/// reference window and classifies it.
std::vector<BlowupStep> blowup_sequence(const ScalarField2D& u, Point2 center, const std::vector<double>& radii,
                                        double tol = 1e-2);

}  // namespace fblab
