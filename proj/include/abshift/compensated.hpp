#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace abshift {

// Error-free transformations. These need strict IEEE semantics; the library
// is compiled with -ffp-contract=off.

/// s + err == a + b exactly.
inline double two_sum(double a, double b, double& err) {
  const double s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

/// Requires |a| >= |b|.
inline double quick_two_sum(double a, double b, double& err) {
  const double s = a + b;
  err = b - (s - a);
  return s;
}

/// p + err == a * b exactly.
inline double two_prod(double a, double b, double& err) {
  const double p = a * b;
  err = std::fma(a, b, -p);
  return p;
}

/*!
 * Compensated summation of doubles (cascaded two_sum, a.k.a. Sum2).
 *
 * The rounding error of every addition is captured exactly and accumulated
 * separately, so the result is as accurate as if computed in twice the
 * working precision and then rounded.
 */
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    double e;
    sum_ = two_sum(sum_, x, e);
    comp_ += e;
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Componentwise compensated sum of complex terms that also tracks sum |term|.
class ComplexCompensatedSum {
 public:
  ComplexCompensatedSum& operator+=(std::complex<double> z) {
    re_ += z.real();
    im_ += z.imag();
    magnitude_ += std::abs(z);
    return *this;
  }

  std::complex<double> value() const { return {re_.value(), im_.value()}; }

  /// Sum of |term| over everything added.
  double magnitude() const { return magnitude_.value(); }

  /// Cancellation ratio sum|term| / |sum|; 1 for an empty or exact-zero sum
  /// without cancellation.
  double condition_number() const {
    const double mag = magnitude();
    const double v = std::abs(value());
    if (mag == 0.0) return 1.0;
    if (v == 0.0) return std::numeric_limits<double>::infinity();
    return mag / v;
  }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
  CompensatedSum magnitude_;
};

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  DoubleDouble() = default;
  DoubleDouble(double h) : hi(h), lo(0.0) {}  // NOLINT(google-explicit-constructor)
  DoubleDouble(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
};

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  double e, f;
  double s = two_sum(a.hi, b.hi, e);
  const double t = two_sum(a.lo, b.lo, f);
  e += t;
  s = quick_two_sum(s, e, e);
  e += f;
  s = quick_two_sum(s, e, e);
  return {s, e};
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  double e;
  const double p = two_prod(a.hi, b.hi, e);
  e += a.hi * b.lo + a.lo * b.hi;
  double lo;
  const double hi = quick_two_sum(p, e, lo);
  return {hi, lo};
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  const double q1 = a.hi / b.hi;
  DoubleDouble r = a - DoubleDouble(q1) * b;
  const double q2 = r.hi / b.hi;
  r = r - DoubleDouble(q2) * b;
  const double q3 = r.hi / b.hi;
  double lo;
  const double hi = quick_two_sum(q1, q2, lo);
  return DoubleDouble(hi, lo) + DoubleDouble(q3);
}

/// Complex number with double-double components.
struct ComplexDD {
  DoubleDouble re;
  DoubleDouble im;

  ComplexDD() = default;
  ComplexDD(DoubleDouble r, DoubleDouble i) : re(r), im(i) {}

  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
  double abs_approx() const { return std::hypot(re.hi, im.hi); }
};

inline ComplexDD operator+(const ComplexDD& a, const ComplexDD& b) {
  return {a.re + b.re, a.im + b.im};
}

inline ComplexDD operator*(const ComplexDD& a, const ComplexDD& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline ComplexDD operator/(const ComplexDD& a, DoubleDouble d) { return {a.re / d, a.im / d}; }

/// z*z for a double-precision z, exact to double-double accuracy.
inline ComplexDD square_exact(std::complex<double> z) {
  const DoubleDouble x(z.real());
  const DoubleDouble y(z.imag());
  return {x * x - y * y, DoubleDouble(2.0) * x * y};
}

}  // namespace abshift
