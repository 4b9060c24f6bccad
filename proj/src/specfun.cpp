#include "abshift/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "abshift/compensated.hpp"

namespace abshift {

namespace {

// Lanczos approximation, g = 7, nine terms (Godfrey's coefficients).
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

double ln_gamma_lanczos(double x) {
  // Gamma(x) = sqrt(2 pi) t^{x - 1/2} e^{-t} A(x), t = x + g - 1/2, for x >= 1/2.
  const double xm1 = x - 1.0;
  double series = kLanczosCoeffs[0];
  for (std::size_t k = 1; k < kLanczosCoeffs.size(); ++k) {
    series += kLanczosCoeffs[k] / (xm1 + static_cast<double>(k));
  }
  const double t = xm1 + kLanczosG + 0.5;
  return kHalfLog2Pi + (xm1 + 0.5) * std::log(t) - t + std::log(series);
}

double inverse_gamma_of_order(double nu) {
  // 1 / Gamma(nu + 1)
  if (nu + 1.0 < 170.0) return 1.0 / std::tgamma(nu + 1.0);
  return std::exp(-ln_gamma(nu + 1.0));
}

void check_radius(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::domain_error("bessel: non-finite argument");
  }
  const double az = std::abs(z);
  if (az > kBesselStabilityRadius) {
    throw NumericalError(ErrorCode::outside_stability_radius,
                         "bessel: |z| = " + std::to_string(az) +
                             " exceeds the series stability radius",
                         az);
  }
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw std::domain_error("BesselOrder: order must be finite and >= 0");
  }
}

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("ln_gamma: argument must be positive and finite");
  }
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x), sin(pi x) > 0 here.
    return std::log(kPi / std::sin(kPi * x)) - ln_gamma_lanczos(1.0 - x);
  }
  return ln_gamma_lanczos(x);
}

Complex principal_pow(Complex z, double nu) {
  if (nu == 0.0) return {1.0, 0.0};
  if (z == Complex{0.0, 0.0}) return {0.0, 0.0};
  double arg = std::arg(z);
  if (arg == -kPi) arg = kPi;
  const double log_abs = std::log(std::abs(z));
  return std::exp(Complex{nu * log_abs, nu * arg});
}

Complex i_pow_neg(double nu) {
  double reduced = std::fmod(nu, 4.0);
  if (reduced < 0.0) reduced += 4.0;
  if (reduced == std::floor(reduced)) {
    switch (static_cast<int>(reduced)) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, -1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, 1.0};
    }
  }
  const double angle = -0.5 * kPi * reduced;
  return {std::cos(angle), std::sin(angle)};
}

int bessel_terms_for(double nu, double abs_z, double tol) {
  const double w = 0.25 * abs_z * abs_z;
  double mag = 1.0;  // |s_l| relative to the leading term
  for (int terms = 1; terms <= kBesselMaxTerms; ++terms) {
    const double l = static_cast<double>(terms - 1);
    mag *= w / ((l + 1.0) * (l + 1.0 + nu));
    const double lnext = static_cast<double>(terms);
    const double q = w / ((lnext + 1.0) * (lnext + 1.0 + nu));
    if (q < 1.0 && mag / (1.0 - q) <= tol) return terms;
  }
  return kBesselMaxTerms;
}

BesselValue bessel_j(BesselOrder order, Complex z, int terms, double tol) {
  if (terms < 1) throw std::invalid_argument("bessel_j: need at least one series term");
  check_radius(z);
  const double nu = order.value();

  BesselValue out;
  out.terms = terms;
  if (z == Complex{0.0, 0.0}) {
    out.value = (nu == 0.0) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    return out;
  }

  // J_nu(z) = (z/2)^nu / Gamma(nu+1) * sum_l w^l / (l! (nu+1)_l),  w = -z^2/4.
  ComplexDD w = square_exact(z);
  w = {w.re * DoubleDouble(-0.25), w.im * DoubleDouble(-0.25)};
  const double abs_w = w.abs_approx();

  ComplexDD term(DoubleDouble(1.0), DoubleDouble(0.0));
  ComplexDD sum;
  CompensatedSum magnitude;
  for (int l = 0; l < terms; ++l) {
    sum = sum + term;
    magnitude += term.abs_approx();
    const DoubleDouble k(static_cast<double>(l + 1));
    const DoubleDouble denom = k * (k + DoubleDouble(nu));
    term = (term * w) / denom;
  }

  // Term ratios |w| / ((l+1)(l+1+nu)) decrease in l, so past l = terms the
  // tail is dominated by a geometric series.
  const double lnext = static_cast<double>(terms);
  const double q = abs_w / ((lnext + 1.0) * (lnext + 1.0 + nu));
  const double inner_tail = q < 1.0 ? term.abs_approx() / (1.0 - q)
                                    : std::numeric_limits<double>::infinity();

  const Complex prefactor = principal_pow(0.5 * z, nu) * inverse_gamma_of_order(nu);
  const Complex inner = sum.to_complex();
  out.value = prefactor * inner;
  out.tail_bound = std::abs(prefactor) * inner_tail;
  const double inner_abs = std::abs(inner);
  out.condition_number = inner_abs > 0.0 ? magnitude.value() / inner_abs
                                         : std::numeric_limits<double>::infinity();

  const double scale = std::max(std::abs(out.value), std::abs(prefactor));
  if (!(out.tail_bound <= tol * scale)) {
    throw NumericalError(ErrorCode::bessel_tail,
                         "bessel_j: tail not converged with " + std::to_string(terms) +
                             " terms (tail bound " + std::to_string(out.tail_bound) + ")",
                         out.tail_bound, bessel_terms_for(nu, std::abs(z), tol));
  }
  return out;
}

BesselValue bessel_j(BesselOrder nu, Complex z, double tol) {
  check_radius(z);
  return bessel_j(nu, z, bessel_terms_for(nu.value(), std::abs(z), tol), tol);
}

BesselValue bessel_i(BesselOrder nu, Complex z, int terms, double tol) {
  BesselValue j = bessel_j(nu, Complex{0.0, 1.0} * z, terms, tol);
  j.value *= i_pow_neg(nu.value());
  return j;
}

BesselValue bessel_i(BesselOrder nu, Complex z, double tol) {
  check_radius(z);
  return bessel_i(nu, z, bessel_terms_for(nu.value(), std::abs(z), tol), tol);
}

double bessel_i0_real(double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_i0_real: argument must be >= 0");
  const double w = 0.25 * x * x;
  CompensatedSum sum;
  double term = 1.0;
  for (int l = 0; l < 10000; ++l) {
    sum += term;
    term *= w / ((l + 1.0) * (l + 1.0));
    if (term < kEps * 0.25 * sum.value() && static_cast<double>(l) > 0.5 * x) break;
  }
  return sum.value();
}

}  // namespace abshift
