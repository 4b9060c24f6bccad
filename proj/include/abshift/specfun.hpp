#pragma once

#include "abshift/types.hpp"

namespace abshift {

/// Largest |z| accepted by the power-series Bessel routines.
inline constexpr double kBesselStabilityRadius = 30.0;

/// Default tail tolerance of the Bessel series (relative to the term scale).
inline constexpr double kBesselDefaultTol = 1e-16;

/// Hard cap on the number of Bessel series terms the adaptive overloads try.
inline constexpr int kBesselMaxTerms = 400;

/// Real, non-negative Bessel order.
class BesselOrder {
 public:
  explicit BesselOrder(double nu);
  double value() const { return nu_; }

 private:
  double nu_;
};

/// A Bessel value with the series bookkeeping that produced it.
struct BesselValue {
  Complex value{};
  // Rigorous bound on the magnitude of all omitted series terms.
  double tail_bound = 0.0;
  int terms = 0;
  // sum |term| / |sum| of the inner series.
  double condition_number = 1.0;
};

/// ln Gamma(x) for x > 0; throws std::domain_error otherwise.
double ln_gamma(double x);

/// Principal power z^nu = exp(nu (ln|z| + i Arg z)), Arg in (-pi, pi]; 0^0 = 1.
Complex principal_pow(Complex z, double nu);

/// i^{-nu} on the principal branch, exp(-i pi nu / 2).
Complex i_pow_neg(double nu);

/*!
 * Bessel function of the first kind J_nu(z) from its ascending series,
 * summed through l = terms - 1.
 *
 * Terms are generated and accumulated in double-double arithmetic so the
 * alternating series keeps full double accuracy up to the stability radius.
 * Throws NumericalError(bessel_tail) when the tail bound at l = terms exceeds
 * tol * max(|J|, leading term), and NumericalError(outside_stability_radius)
 * for |z| > kBesselStabilityRadius.
 */
BesselValue bessel_j(BesselOrder nu, Complex z, int terms, double tol = kBesselDefaultTol);

/// As above with the number of terms chosen from the tail bound.
BesselValue bessel_j(BesselOrder nu, Complex z, double tol = kBesselDefaultTol);

/// Modified Bessel I_nu(z) := i^{-nu} J_nu(i z).
BesselValue bessel_i(BesselOrder nu, Complex z, int terms, double tol = kBesselDefaultTol);
BesselValue bessel_i(BesselOrder nu, Complex z, double tol = kBesselDefaultTol);

/// I_0(x) for real x >= 0 via the all-positive series (no stability limit).
double bessel_i0_real(double x);

/// Smallest term count whose series tail bound meets tol at (nu, |z|).
int bessel_terms_for(double nu, double abs_z, double tol = kBesselDefaultTol);

}  // namespace abshift
