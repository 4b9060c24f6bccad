#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace abshift {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEps = 2.220446049250313080847263336181640625e-16;

/// Failure categories raised by the numerical layers.
enum class ErrorCode {
  singular_time,
  outside_stability_radius,
  bessel_tail,
  winding_tail,
  quadrature_tail,
  series_tail,
  cutoff_insufficient,
};

/*!
 * A numerical contract could not be met.
 *
 * Carries the achieved error or tail estimate so callers can report how far
 * off the request was, plus an optional suggested truncation that would meet
 * it (e.g. the series order a failed tail check needs).
 */
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorCode code, const std::string& what, double achieved = 0.0,
                 int suggestion = 0)
      : std::runtime_error(what), code_(code), achieved_(achieved), suggestion_(suggestion) {}

  ErrorCode code() const noexcept { return code_; }
  double achieved() const noexcept { return achieved_; }
  int suggestion() const noexcept { return suggestion_; }

 private:
  ErrorCode code_;
  double achieved_;
  int suggestion_;
};

/// Bookkeeping attached to every computed amplitude.
struct Diagnostics {
  int terms_used = 0;
  double condition_number = 1.0;
  double winding_tail = 0.0;
  double quadrature_tail = 0.0;
  double node_doubling = 0.0;
  double series_tail = 0.0;
  bool cancellation_warning = false;
  // Largest |g(a)^{m-l} h(a)^l - operator action| seen by the representation check.
  double operator_consistency = 0.0;
};

/// A complex amplitude together with its accumulated error estimate.
struct FieldValue {
  Complex value{};
  double error = 0.0;
  Diagnostics diagnostics{};
};

}  // namespace abshift
