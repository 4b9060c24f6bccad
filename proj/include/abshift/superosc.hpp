#pragma once

#include <vector>

#include "abshift/types.hpp"

namespace abshift {

/// Coefficient-decay envelope |f_j| <= C_f b^j / j!.
struct DecayCertificate {
  double C_f = 1.0;
  double b = 0.25;
  // False when no grid value of b makes the stored tail non-increasing; the
  // envelope still holds for the stored coefficients.
  bool trend_ok = true;
};

/// Grid of b values tried by the certificate, smallest first.
inline constexpr double kDecayGrid[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

/*!
 * Smallest grid b whose scaled coefficients s_j = |f_j| j! / b^j do not grow
 * between the last two nonzero coefficients, with C_f = max_j s_j. An all-zero
 * sequence gets {1, 0.25}.
 */
DecayCertificate decay_certificate(const std::vector<Complex>& coeffs);

/*!
 * Truncated power series c_0 + c_1 w + ... + c_D w^D of an entire function,
 * with a coefficient-decay envelope |c_j| <= decay_C * decay_b^j / j!.
 *
 * The envelope is computed on construction (see coeff_decay_certificate in
 * iodo.hpp for the rule) so every stored coefficient satisfies it.
 */
class EntireSeries {
 public:
  EntireSeries() : EntireSeries(std::vector<Complex>{}) {}
  explicit EntireSeries(std::vector<Complex> coeffs);

  /// Real-coefficient polynomial convenience constructor.
  static EntireSeries polynomial(const std::vector<double>& coeffs);
  /// Taylor polynomial of e^{i a w} through degree `degree`.
  static EntireSeries exponential(Complex a, int degree);
  static EntireSeries zero() { return EntireSeries(); }
  static EntireSeries identity() { return polynomial({0.0, 1.0}); }

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  /// Coefficient j, zero beyond the stored degree.
  Complex coeff(std::size_t j) const { return j < coeffs_.size() ? coeffs_[j] : Complex{}; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const;

  double decay_C() const { return certificate_.C_f; }
  double decay_b() const { return certificate_.b; }
  const DecayCertificate& certificate() const { return certificate_; }

  /// True when every stored coefficient respects the decay envelope.
  bool satisfies_decay(double rel_slack = 1e-12) const;

  /// sum_j |c_j| b^j.
  double weighted_abs_sum(double b) const;

  EntireSeries operator-(const EntireSeries& other) const;
  EntireSeries operator*(Complex scale) const;

 private:
  std::vector<Complex> coeffs_;
  DecayCertificate certificate_;
};

/// Horner evaluation of the stored truncation.
Complex entire_eval(const EntireSeries& s, Complex lambda);

/// The datum parameters n, a and the entire functions g, h of Y_n.
struct SuperoscSpec {
  int n = 1;
  double a = 2.0;
  EntireSeries g = EntireSeries::identity();
  EntireSeries h = EntireSeries::zero();

  /// Throws std::invalid_argument unless n >= 1 and |a| > 1.
  void validate() const;
};

/// A superoscillatory sum with its cancellation diagnostics.
struct SumResult {
  Complex value{};
  // sum_j |term_j| / |value|
  double kappa = 1.0;
  // kappa * eps > tolerance
  bool cancellation_warning = false;
};

/// Default cancellation tolerance for the warning flag.
inline constexpr double kCancellationTol = 1e-3;

/*!
 * C_j(n, a) = binom(n, j) ((1+a)/2)^{n-j} ((1-a)/2)^j.
 *
 * Evaluated as sign * exp(log-magnitude); valid for n up to a few hundred.
 */
double coeff_C(int n, int j, double a);

/// All n+1 coefficients C_0..C_n.
std::vector<double> coeff_C_all(int n, double a);

/// Frequencies 1 - 2j/n, j = 0..n.
std::vector<double> superosc_frequencies(int n);

/// F_n(x, a) = sum_j C_j(n, a) e^{i (1 - 2j/n) x}, x complex allowed.
SumResult f_n(Complex x, int n, double a, double tol = kCancellationTol);

/// Y_n(x, y) = sum_j C_j e^{i g(1-2j/n) x} e^{i h(1-2j/n) y}.
SumResult y_n(double x, double y, const SuperoscSpec& spec, double tol = kCancellationTol);

/// Taylor coefficients of F_n(w, a) through `degree`: (i^k/k!) sum_j C_j (1-2j/n)^k.
EntireSeries f_n_series(int n, double a, int degree);

}  // namespace abshift
