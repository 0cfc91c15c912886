#pragma once

#include <vector>

namespace fblab {

/// Normalized exponential bump beta(t) = c * exp(-1 / (t (1 - t))) on (0, 1),
/// zero elsewhere, with unit mass. Also provides the rescaled forcing
/// beta_eps(t) = beta(t / eps) / eps and its primitive B_eps.
///
/// Immutable after construction; all member functions are thread-safe.
class BumpProfile {
 public:
  static constexpr int kTableSize = 4096;

  /// Computes the normalization and the primitive table; throws if the table
  /// mass deviates from 1 by more than 1e-10.
  BumpProfile();

  /// Shared instance; construction happens once.
  static const BumpProfile& standard();

  double normalization() const { return c_; }
  double peak() const { return peak_; }

  double beta(double t) const;
  /// d beta / dt.
  double beta_prime(double t) const;
  /// Integral of beta over [0, t], clamped to [0, 1] outside the support.
  double primitive(double t) const;

  double beta_eps(double t, double eps) const;
  double beta_eps_prime(double t, double eps) const;
  /// B_eps(v) = integral_0^v beta_eps.
  double big_beta_eps(double v, double eps) const;

 private:
  double c_ = 0.0;
  double peak_ = 0.0;
  std::vector<double> table_;   // primitive at t_k = k / (kTableSize - 1)
  std::vector<double> slopes_;  // limited Hermite slopes
};

}  // namespace fblab
