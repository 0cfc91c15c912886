#pragma once

#include <array>
#include <vector>

namespace fblab {

/// u(x) = -x^2 log(eps + x^4) for x > 0, 0 otherwise, with derivatives 0..4
/// in closed form.
std::array<double, 5> contr_u(double x, double eps);

/// 10 + 2 log(2 eps): the printed value of u''(eps^(1/4)). The closed form
/// gives the negative of this number.
double contr_probe_reference(double eps);

/// One member of the logarithmic family together with its extended forcing.
///
/// The forcing is the closed formula on (0, iota], the formula times a
/// smooth step down to zero on [iota, 2 iota], and a scaled exponential bump
/// carrying the remaining mass on (2 iota, eps). iota is the largest power of
/// two <= eps/4 for which the formula stays nonnegative up to 2 iota and the
/// formula mass stays below 1.
class ContrFamily {
 public:
  /// Throws ParameterError unless 0 < eps <= e^-2 - e^-3.
  explicit ContrFamily(double eps);

  double eps() const { return eps_; }
  double iota() const { return iota_; }
  /// zeta(iota): right end of the branch where 2u'''' + beta(u) = 0 holds.
  double branch_end() const { return branch_end_; }

  std::array<double, 5> u(double x) const { return contr_u(x, eps_); }
  /// Inverse of u on (0, e^-3/4); t must lie in (0, u(e^-3/4)).
  double zeta(double t) const;
  /// -16 z^2 (z^12 - 11 eps z^8 + 135 eps^2 z^4 - 45 eps^3) / (z^4 + eps)^4, z = zeta(t).
  double beta_formula(double t) const;
  /// Extended forcing, zero outside (0, eps).
  double beta(double t) const;

  double formula_mass() const { return formula_mass_; }
  double blend_mass() const { return blend_mass_; }
  double bump_mass() const { return bump_mass_; }

 private:
  double eps_;
  double iota_ = 0.0;
  double branch_end_ = 0.0;
  double blend_end_ = 0.0;  // zeta(2 iota)
  double formula_mass_ = 0.0;
  double blend_mass_ = 0.0;
  double bump_mass_ = 0.0;
};

struct ContrBlowupRow {
  double eps = 0.0;
  double delta = 0.0;
  /// sup of |u''| over (-delta, delta); attained as x -> 0+.
  double max_abs_u2 = 0.0;
  double probe_x = 0.0;
  double probe_u2 = 0.0;
  double reference = 0.0;  // 10 + 2 log(2 eps)
  /// | |probe_u2| - |reference| | / |reference|
  double probe_defect = 0.0;
};

struct ContrBlowupReport {
  std::vector<ContrBlowupRow> rows;
  /// max_abs_u2 increases along the list.
  bool increasing = false;
};

/// delta = e^-3/4 / 2. Rows in input order; eps_list should be decreasing.
ContrBlowupReport contr_blowup_report(const std::vector<double>& eps_list);

/// Smooth profile of the second family:
///   phi(x) = s e^{-1/x - x} + sum_j (j^2 - s e^{-1/j - j}) b((x - j)/w_j),
/// b(y) = exp(1 - 1/(1 - y^2)) with b(0) = 1, w_j = 2^-j / (4 j^2), and s
/// tuned so that the total mass is 1. phi vanishes on (-inf, 0], is positive
/// on (0, inf) and phi(j) = j^2.
class ExampleProfile {
 public:
  static const ExampleProfile& standard();

  /// phi and its first three derivatives.
  std::array<double, 4> phi(double x) const;
  /// int_0^x phi
  double u(double x) const;
  /// Inverse of u on [0, 1).
  double v(double t) const;
  /// -2 u''''(v(t)) = -2 phi'''(v(t)) on [0, 1), zero elsewhere.
  double beta(double t) const;

  double minorant_scale() const { return s_; }
  static double bump_width(int j);

 private:
  ExampleProfile();
  double s_ = 0.0;
  double bump_mass_ = 0.0;    // int b over (-1, 1)
  double minorant_mass_ = 0.0;  // int_0^inf e^{-1/x - x}
};

struct ExampleValue {
  double u = 0.0;
  double du = 0.0;
};

/// eps_k u(x / sqrt(eps_k)) and its derivative, eps_k = k^-2.
ExampleValue example_u(double x, int k);
/// Fourth derivative of eps_k u(x / sqrt(eps_k)).
double example_u4(double x, int k);
/// beta_eps(t) = beta(t / eps_k) / eps_k; zero for t / eps_k outside [0, 1).
double example_beta(double t, int k);

}  // namespace fblab
