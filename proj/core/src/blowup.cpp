#include "fblab/blowup.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fblab/errors.hpp"
#include "fblab/interpolation.hpp"
#include "fblab/operators.hpp"
#include "fblab/polar.hpp"

namespace fblab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double integrate(const auto& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  if (!(b > a)) return 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-12);
}

struct Sample {
  double dx, dy, u;
};

struct Model {
  double theta, alpha, gamma;
};

double misfit(const std::vector<Sample>& pts, const Model& m) {
  const double c = std::cos(m.theta), s = std::sin(m.theta);
  double acc = 0.0;
  for (const Sample& p : pts) {
    const double t = c * p.dx + s * p.dy;
    const double v = t > 0.0 ? 0.5 * m.alpha * t * t : 0.5 * m.gamma * t * t;
    acc += (v - p.u) * (v - p.u);
  }
  return acc;
}

// Linear least squares for (alpha, gamma) at fixed theta.
void fit_coefficients(const std::vector<Sample>& pts, Model& m) {
  const double c = std::cos(m.theta), s = std::sin(m.theta);
  double pp = 0.0, pu = 0.0, nn = 0.0, nu = 0.0;
  for (const Sample& p : pts) {
    const double t = c * p.dx + s * p.dy;
    const double f = 0.5 * t * t;
    if (t > 0.0) {
      pp += f * f;
      pu += f * p.u;
    } else {
      nn += f * f;
      nu += f * p.u;
    }
  }
  m.alpha = pp > 0.0 ? pu / pp : 0.0;
  m.gamma = nn > 0.0 ? nu / nn : 0.0;
}

void gauss_newton(const std::vector<Sample>& pts, Model& m) {
  double f = misfit(pts, m);
  for (int it = 0; it < 100 && f > 0.0; ++it) {
    const double c = std::cos(m.theta), s = std::sin(m.theta);
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (const Sample& p : pts) {
      const double t = c * p.dx + s * p.dy;
      const double dt = -s * p.dx + c * p.dy;
      const bool pos = t > 0.0;
      const double v = 0.5 * (pos ? m.alpha : m.gamma) * t * t;
      Eigen::Vector3d row((pos ? m.alpha : m.gamma) * t * dt, pos ? 0.5 * t * t : 0.0, pos ? 0.0 : 0.5 * t * t);
      jtj += row * row.transpose();
      jtr += row * (v - p.u);
    }
    const Eigen::Vector3d step = jtj.ldlt().solve(-jtr);
    if (!step.allFinite()) break;
    double lambda = 1.0;
    bool moved = false;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      Model trial{m.theta + lambda * step[0], m.alpha + lambda * step[1], m.gamma + lambda * step[2]};
      const double ft = misfit(pts, trial);
      if (ft < f) {
        m = trial;
        moved = f - ft > 1e-30 * f;
        f = ft;
        break;
      }
    }
    if (!moved || step.norm() < 1e-15 * (1.0 + std::abs(m.alpha) + std::abs(m.gamma))) break;
  }
}

}  // namespace

ScalarField2D rescale(const ScalarField2D& u, Point2 center, double r, const Grid2D& reference) {
  if (!(r > 0.0)) throw ParameterError("rescaling radius must be positive");
  ScalarField2D out = ScalarField2D::rectangle(reference, 0.0);
  for (int j = 0; j < reference.ny; ++j) {
    for (int i = 0; i < reference.nx; ++i) {
      const Point2 p{center.x + r * reference.x(i), center.y + r * reference.y(j)};
      const auto v = try_interpolate(u, p);
      if (!v) {
        std::ostringstream msg;
        msg << "rescaled window at radius " << r << " leaves the data region near (" << p.x << ", " << p.y << ")";
        throw GeometryError(msg.str());
      }
      out(i, j) = *v / (r * r);
    }
  }
  return out;
}

ScalarField2D rescale(const ScalarField2D& u, Point2 center, double r) {
  return rescale(u, center, r, Grid2D::square(65, -1.0, 1.0));
}

DetachmentFit fit_quadratic_detachment(const ScalarField2D& u, Point2 center, double window) {
  if (!(window > 0.0)) throw ParameterError("fit window must be positive");
  const Grid2D& g = u.grid();
  const Hessian he = hessian(u);
  std::vector<Sample> pts;
  double hxx = 0.0, hxy = 0.0, hyy = 0.0, norm2 = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double dx = g.x(i) - center.x, dy = g.y(j) - center.y;
      if (dx * dx + dy * dy > window * window || !u.defined(i, j)) continue;
      pts.push_back({dx, dy, u(i, j)});
      norm2 += u(i, j) * u(i, j);
      if (!he.xx.defined(i, j)) continue;
      // (D^2u)^2 keeps the axis when the two sides have opposite signs.
      const double a = he.xx(i, j), b = he.xy(i, j), c = he.yy(i, j);
      hxx += a * a + b * b;
      hxy += b * (a + c);
      hyy += b * b + c * c;
    }
  }
  if (pts.size() < 6) throw ResolutionError("fit window holds fewer than 6 nodes");

  DetachmentFit fit;
  fit.center = center;
  if (norm2 == 0.0) {
    fit.zero_profile = true;
    fit.defect_mixed = 1.0;
    return fit;
  }
  Model m{0.5 * std::atan2(2.0 * hxy, hxx - hyy), 0.0, 0.0};
  fit_coefficients(pts, m);
  gauss_newton(pts, m);
  fit_coefficients(pts, m);
  if (m.alpha < m.gamma) {
    m.theta += std::numbers::pi;
    std::swap(m.alpha, m.gamma);
  }
  m.theta = std::remainder(m.theta, 2.0 * std::numbers::pi);
  fit.direction = {std::cos(m.theta), std::sin(m.theta)};
  fit.alpha = m.alpha;
  fit.gamma = m.gamma;
  fit.fit_residual = std::sqrt(misfit(pts, m) / norm2);
  fit.defect_equal = std::abs(m.alpha - m.gamma);
  fit.defect_mixed = std::abs(m.alpha * m.alpha - m.gamma * m.gamma - 1.0);
  return fit;
}

const char* to_string(DetachmentLabel label) {
  switch (label) {
    case DetachmentLabel::both_positive: return "both-positive";
    case DetachmentLabel::both_negative: return "both-negative";
    case DetachmentLabel::mixed: return "mixed";
    case DetachmentLabel::forbidden: return "forbidden";
    case DetachmentLabel::zero: return "zero";
    case DetachmentLabel::unclassified: return "unclassified";
  }
  return "unclassified";
}

DetachmentClass classify_detachment(double alpha, double gamma, double tol) {
  DetachmentClass out;
  const double hi = std::max(alpha, gamma), lo = std::min(alpha, gamma);
  if (std::max(std::abs(alpha), std::abs(gamma)) <= tol) {
    out.label = out.candidate = DetachmentLabel::zero;
    out.defect = std::max(std::abs(alpha), std::abs(gamma));
    return out;
  }
  bool ok = false;
  if (std::abs(hi) <= tol && lo < -tol) {
    out.candidate = DetachmentLabel::forbidden;
    out.defect = std::abs(lo);
    ok = true;
  } else if (lo > tol) {
    out.candidate = DetachmentLabel::both_positive;
    out.defect = hi - lo;
    ok = out.defect <= tol * (1.0 + std::abs(hi));
  } else if (hi < -tol) {
    out.candidate = DetachmentLabel::both_negative;
    out.defect = hi - lo;
    ok = out.defect <= tol * (1.0 + std::abs(lo));
  } else {
    out.candidate = DetachmentLabel::mixed;
    out.defect = std::abs(hi * hi - lo * lo - 1.0);
    ok = out.defect <= tol;
  }
  out.label = ok ? out.candidate : DetachmentLabel::unclassified;
  return out;
}

ScalarBump::ScalarBump(Box support, double amplitude) : box_(support), amp_(amplitude) {
  if (!(box_.xhi > box_.xlo) || !(box_.yhi > box_.ylo)) throw ParameterError("bump support box is empty");
}

double ScalarBump::value(Point2 p) const {
  const double lx = box_.xhi - box_.xlo, ly = box_.yhi - box_.ylo;
  return amp_ * Bump1D::value((p.x - box_.xlo) / lx) * Bump1D::value((p.y - box_.ylo) / ly);
}

double ScalarBump::d1(Point2 p) const {
  const double lx = box_.xhi - box_.xlo, ly = box_.yhi - box_.ylo;
  return amp_ * Bump1D::d1((p.x - box_.xlo) / lx) / lx * Bump1D::value((p.y - box_.ylo) / ly);
}

ScalarBump standard_detachment_bump() {
  const Box box{-0.3, 0.5, -0.4, 0.4};
  const ScalarBump unit(box, 1.0);
  const double trace = integrate([&](double y) { return unit.value({0.0, y}); }, box.ylo, box.yhi);
  return ScalarBump(box, 1.0 / trace);
}

double detachment_identity_residual(double alpha, double gamma, const ScalarBump& psi) {
  const Box& b = psi.support();
  auto half = [&](double xlo, double xhi) {
    xlo = std::max(xlo, b.xlo);
    xhi = std::min(xhi, b.xhi);
    return integrate(
        [&](double y) { return integrate([&](double x) { return psi.d1({x, y}); }, xlo, xhi); }, b.ylo, b.yhi);
  };
  const double right = half(0.0, b.xhi);
  const double left = half(b.xlo, 0.0);
  // {u > 0} for the profile: each side where its coefficient is positive.
  const double positive = (alpha > 0.0 ? right : 0.0) + (gamma > 0.0 ? left : 0.0);
  return alpha * alpha * right + gamma * gamma * left - positive;
}

double homogeneity_defect(const ScalarField2D& u, Point2 center, const std::vector<double>& radii) {
  const FieldDerivatives d(u);
  double worst = 0.0;
  for (double r : radii) {
    const PolarRing ring = polar_ring_sample(d, center, r);
    std::vector<double> num(ring.size()), den(ring.size());
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const double grad = std::hypot(ring.u_r[k], ring.u_theta[k] / r);
      num[k] = std::abs(r * ring.u_r[k] - 2.0 * ring.u[k]);
      den[k] = std::abs(ring.u[k]) + r * grad;
    }
    const double ratio = ring_integral(ring, num) / (ring_integral(ring, den) + 1e-300);
    worst = std::max(worst, ratio);
  }
  return worst;
}

std::vector<BlowupStep> blowup_sequence(const ScalarField2D& u, Point2 center, const std::vector<double>& radii,
                                        double tol) {
  std::vector<BlowupStep> out;
  ScalarField2D prev;
  for (double r : radii) {
    BlowupStep step;
    step.r = r;
    ScalarField2D v = rescale(u, center, r);
    step.sup = max_abs(v);
    step.cauchy_gap = out.empty() ? kNaN : max_abs_diff(v, prev);
    step.fit = fit_quadratic_detachment(v, {0.0, 0.0}, 1.0);
    step.cls = classify_detachment(step.fit.alpha, step.fit.gamma, tol);
    out.push_back(step);
    prev = std::move(v);
  }
  return out;
}

}  // namespace fblab
