#include "abshift/superosc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "abshift/compensated.hpp"
#include "abshift/specfun.hpp"

namespace abshift {

namespace {

double factorial(int j) {
  return j <= 170 ? std::tgamma(static_cast<double>(j) + 1.0)
                  : std::numeric_limits<double>::infinity();
}

// |f_j| j! / b^j, in log space once j! overflows.
double scaled_coefficient(Complex c, int j, double b) {
  const double mag = std::abs(c);
  if (mag == 0.0) return 0.0;
  if (j <= 170) return mag * factorial(j) / std::pow(b, j);
  return std::exp(std::log(mag) + ln_gamma(j + 1.0) - j * std::log(b));
}

double ln_binomial(int n, int j) {
  if (n <= 66) {
    // Exact in 128-bit integers; every intermediate binomial fits.
    unsigned __int128 acc = 1;
    const int k = std::min(j, n - j);
    for (int i = 1; i <= k; ++i) {
      acc = acc * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    }
    return std::log(static_cast<double>(acc));
  }
  return ln_gamma(n + 1.0) - ln_gamma(j + 1.0) - ln_gamma(n - j + 1.0);
}

Complex i_pow(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

SumResult finish(const ComplexCompensatedSum& sum, double tol) {
  SumResult out;
  out.value = sum.value();
  out.kappa = sum.condition_number();
  out.cancellation_warning = out.kappa * kEps > tol;
  return out;
}

void check_n(int n) {
  if (n < 1) throw std::invalid_argument("superoscillation order n must be >= 1");
}

}  // namespace

DecayCertificate decay_certificate(const std::vector<Complex>& coeffs) {
  std::vector<int> nonzero;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (std::abs(coeffs[j]) > 0.0) nonzero.push_back(static_cast<int>(j));
  }
  DecayCertificate cert;
  if (nonzero.empty()) return cert;

  auto envelope = [&](double b) {
    double c_f = 0.0;
    for (int j : nonzero) c_f = std::max(c_f, scaled_coefficient(coeffs[j], j, b));
    return c_f;
  };

  for (double b : kDecayGrid) {
    bool accept = true;
    if (nonzero.size() >= 2) {
      const int last = nonzero.back();
      const int prev = nonzero[nonzero.size() - 2];
      accept = scaled_coefficient(coeffs[last], last, b) <=
               scaled_coefficient(coeffs[prev], prev, b);
    }
    if (accept) {
      cert.b = b;
      cert.C_f = envelope(b);
      cert.trend_ok = true;
      return cert;
    }
  }
  cert.b = kDecayGrid[std::size(kDecayGrid) - 1];
  cert.C_f = envelope(cert.b);
  cert.trend_ok = false;
  return cert;
}

EntireSeries::EntireSeries(std::vector<Complex> coeffs)
    : coeffs_(std::move(coeffs)), certificate_(decay_certificate(coeffs_)) {}

EntireSeries EntireSeries::polynomial(const std::vector<double>& coeffs) {
  return EntireSeries(std::vector<Complex>(coeffs.begin(), coeffs.end()));
}

EntireSeries EntireSeries::exponential(Complex a, int degree) {
  if (degree < 0) throw std::invalid_argument("exponential: degree must be >= 0");
  std::vector<Complex> c(static_cast<std::size_t>(degree) + 1);
  const Complex ia = Complex{0.0, 1.0} * a;
  c[0] = 1.0;
  for (int k = 1; k <= degree; ++k) c[k] = c[k - 1] * ia / static_cast<double>(k);
  return EntireSeries(std::move(c));
}

bool EntireSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](Complex c) { return std::abs(c) == 0.0; });
}

bool EntireSeries::satisfies_decay(double rel_slack) const {
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const double s = scaled_coefficient(coeffs_[j], static_cast<int>(j), certificate_.b);
    if (s > certificate_.C_f * (1.0 + rel_slack)) return false;
  }
  return true;
}

double EntireSeries::weighted_abs_sum(double b) const {
  CompensatedSum sum;
  double power = 1.0;
  for (Complex c : coeffs_) {
    sum += std::abs(c) * power;
    power *= b;
  }
  return sum.value();
}

EntireSeries EntireSeries::operator-(const EntireSeries& other) const {
  const std::size_t n = std::max(coeffs_.size(), other.coeffs_.size());
  std::vector<Complex> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = coeff(j) - other.coeff(j);
  return EntireSeries(std::move(c));
}

EntireSeries EntireSeries::operator*(Complex scale) const {
  std::vector<Complex> c(coeffs_);
  for (Complex& v : c) v *= scale;
  return EntireSeries(std::move(c));
}

Complex entire_eval(const EntireSeries& s, Complex lambda) {
  const auto& c = s.coeffs();
  Complex acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * lambda + *it;
  return acc;
}

void SuperoscSpec::validate() const {
  check_n(n);
  if (!(std::abs(a) > 1.0)) {
    throw std::invalid_argument("superoscillation parameter must satisfy |a| > 1");
  }
}

double coeff_C(int n, int j, double a) {
  if (n < 0 || j < 0 || j > n) {
    throw std::invalid_argument("coeff_C: need 0 <= j <= n");
  }
  const double p = 0.5 * (1.0 + a);
  const double q = 0.5 * (1.0 - a);
  const int np = n - j;
  if ((p == 0.0 && np > 0) || (q == 0.0 && j > 0)) return 0.0;

  double sign = 1.0;
  if (p < 0.0 && (np & 1)) sign = -sign;
  if (q < 0.0 && (j & 1)) sign = -sign;

  double log_mag = ln_binomial(n, j);
  if (np > 0) log_mag += np * std::log(std::abs(p));
  if (j > 0) log_mag += j * std::log(std::abs(q));
  return sign * std::exp(log_mag);
}

std::vector<double> coeff_C_all(int n, double a) {
  std::vector<double> c(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) c[j] = coeff_C(n, j, a);
  return c;
}

std::vector<double> superosc_frequencies(int n) {
  check_n(n);
  std::vector<double> lam(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    lam[j] = static_cast<double>(n - 2 * j) / static_cast<double>(n);
  }
  return lam;
}

SumResult f_n(Complex x, int n, double a, double tol) {
  check_n(n);
  const auto lam = superosc_frequencies(n);
  ComplexCompensatedSum sum;
  for (int j = 0; j <= n; ++j) {
    sum += coeff_C(n, j, a) * std::exp(Complex{0.0, 1.0} * lam[j] * x);
  }
  return finish(sum, tol);
}

SumResult y_n(double x, double y, const SuperoscSpec& spec, double tol) {
  check_n(spec.n);
  const auto lam = superosc_frequencies(spec.n);
  const Complex i{0.0, 1.0};
  ComplexCompensatedSum sum;
  for (int j = 0; j <= spec.n; ++j) {
    const Complex gx = entire_eval(spec.g, lam[j]) * x;
    const Complex hy = entire_eval(spec.h, lam[j]) * y;
    sum += coeff_C(spec.n, j, spec.a) * std::exp(i * gx) * std::exp(i * hy);
  }
  return finish(sum, tol);
}

EntireSeries f_n_series(int n, double a, int degree) {
  check_n(n);
  if (degree < 0 || degree > 170) {
    throw std::invalid_argument("f_n_series: degree must lie in [0, 170]");
  }
  const auto lam = superosc_frequencies(n);
  const auto c = coeff_C_all(n, a);
  std::vector<Complex> out(static_cast<std::size_t>(degree) + 1);
  std::vector<double> power(c.size(), 1.0);
  for (int k = 0; k <= degree; ++k) {
    CompensatedSum moment;
    for (std::size_t j = 0; j < c.size(); ++j) moment += c[j] * power[j];
    out[k] = i_pow(k) * (moment.value() / factorial(k));
    for (std::size_t j = 0; j < c.size(); ++j) power[j] *= lam[j];
  }
  return EntireSeries(std::move(out));
}

}  // namespace abshift
