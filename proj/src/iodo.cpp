#include "abshift/iodo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "abshift/compensated.hpp"
#include "abshift/specfun.hpp"

namespace abshift {

namespace {

// Radical inverse of k in the given base.
double radical_inverse(unsigned k, unsigned base) {
  double inv = 1.0 / base, f = inv, out = 0.0;
  while (k > 0) {
    out += f * (k % base);
    k /= base;
    f *= inv;
  }
  return out;
}

// Coefficients x_u / i^u for u <= cutoff.
std::vector<Complex> rotated_coeffs(const EntireSeries& s, int cutoff) {
  const int top = std::min(cutoff, s.degree());
  std::vector<Complex> out(static_cast<std::size_t>(std::max(top, -1) + 1));
  Complex inv_i_pow{1.0, 0.0};
  for (int u = 0; u <= top; ++u) {
    out[u] = s.coeff(u) * inv_i_pow;
    inv_i_pow *= Complex{0.0, -1.0};
  }
  return out;
}

std::vector<Complex> convolve(const std::vector<Complex>& p, const std::vector<Complex>& q) {
  if (p.empty() || q.empty()) return {};
  std::vector<ComplexCompensatedSum> acc(p.size() + q.size() - 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) acc[i + j] += p[i] * q[j];
  }
  std::vector<Complex> out(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) out[k] = acc[k].value();
  return out;
}

double weighted_sum(const EntireSeries& s, double b, int top) {
  CompensatedSum acc;
  double power = 1.0;
  for (int u = 0; u <= std::min(top, s.degree()); ++u) {
    acc += std::abs(s.coeff(u)) * power;
    power *= b;
  }
  return acc.value();
}

double log_factorial(int n) { return ln_gamma(n + 1.0); }

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

OperatorIndex::OperatorIndex(int m_in, int l_in) : m(m_in), l(l_in) {
  if (m_in < 0 || l_in < 0 || l_in > m_in) {
    throw std::invalid_argument("OperatorIndex: need 0 <= l <= m");
  }
}

std::vector<Complex> disc_samples(int samples, double sample_radius) {
  if (samples < 1) throw std::invalid_argument("disc_samples: samples must be >= 1");
  if (!(sample_radius > 0.0)) throw std::invalid_argument("disc_samples: radius must be > 0");
  std::vector<Complex> w(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const unsigned u = static_cast<unsigned>(k);
    w[k] = std::polar(sample_radius * std::sqrt(radical_inverse(u, 2)),
                      2.0 * kPi * radical_inverse(u, 3));
  }
  return w;
}

double a1_norm_estimate(const std::function<Complex(Complex)>& f, double B, int samples,
                        double sample_radius) {
  if (!(B > 0.0)) throw std::invalid_argument("a1_norm_estimate: B must be > 0");
  double best = 0.0;
  for (Complex w : disc_samples(samples, sample_radius)) {
    best = std::max(best, std::abs(f(w)) * std::exp(-B * std::abs(w)));
  }
  return best;
}

double a1_norm_estimate(const EntireSeries& series, double B, int samples, double sample_radius) {
  return a1_norm_estimate([&](Complex w) { return entire_eval(series, w); }, B, samples,
                          sample_radius);
}

A1Witness a1_witness(const EntireSeries& series, double B, int samples, double sample_radius) {
  return {series, B, a1_norm_estimate(series, B, samples, sample_radius), sample_radius};
}

DecayCertificate coeff_decay_certificate(const EntireSeries& series) {
  if (series.is_zero()) {
    throw std::invalid_argument("coeff_decay_certificate: series has no nonzero coefficient");
  }
  return series.certificate();
}

OperatorAction operator_action(const EntireSeries& g, const EntireSeries& h, OperatorIndex idx,
                               const EntireSeries& f, int cutoff, double tol) {
  if (cutoff < 0) throw std::invalid_argument("operator_action: cutoff must be >= 0");
  const auto gt = rotated_coeffs(g, cutoff);
  const auto ht = rotated_coeffs(h, cutoff);

  std::vector<Complex> poly{Complex{1.0, 0.0}};
  for (int p = 0; p < idx.m - idx.l; ++p) poly = convolve(poly, gt);
  for (int q = 0; q < idx.l; ++q) poly = convolve(poly, ht);

  OperatorAction out;
  ComplexCompensatedSum acc;
  for (std::size_t S = 0; S < poly.size(); ++S) {
    const Complex fs = f.coeff(S);
    if (fs == Complex{}) continue;
    acc += poly[S] * fs * factorial(static_cast<int>(S));
  }
  out.value = acc.value();
  out.degrees = static_cast<int>(poly.size());

  // |f_S| S! <= C_f b^S turns the omitted multi-indices into full minus truncated sums.
  const DecayCertificate cert = f.certificate();
  const int ml = idx.m - idx.l;
  const double g_all = weighted_sum(g, cert.b, g.degree());
  const double h_all = weighted_sum(h, cert.b, h.degree());
  const double g_cut = weighted_sum(g, cert.b, cutoff);
  const double h_cut = weighted_sum(h, cert.b, cutoff);
  const double full = std::pow(g_all, ml) * std::pow(h_all, idx.l);
  const double kept = std::pow(g_cut, ml) * std::pow(h_cut, idx.l);
  out.cutoff_tail = cert.C_f * std::max(0.0, full - kept);
  if (out.cutoff_tail > tol * std::max(1.0, std::abs(out.value))) {
    throw NumericalError(ErrorCode::cutoff_insufficient,
                         "cutoff insufficient: neglected-term majorant " +
                             std::to_string(out.cutoff_tail),
                         out.cutoff_tail, std::max(g.degree(), h.degree()));
  }
  return out;
}

Complex operator_apply_at_zero(const EntireSeries& g, const EntireSeries& h, OperatorIndex idx,
                               const EntireSeries& f, int cutoff, double tol) {
  return operator_action(g, h, idx, f, cutoff, tol).value;
}

double operator_estimate(const EntireSeries& g, const EntireSeries& h, OperatorIndex idx,
                         const DecayCertificate& cert) {
  return cert.C_f * std::pow(g.weighted_abs_sum(cert.b), idx.m - idx.l) *
         std::pow(h.weighted_abs_sum(cert.b), idx.l);
}

double moment_series_tail(double kappa, double S, int M_max) {
  if (!(kappa > 0.0)) throw std::invalid_argument("moment_series_tail: kappa must be > 0");
  if (S == 0.0) return 0.0;
  // Majorant Q_m = (1 / (2 kappa)) (S / sqrt(kappa))^m / sqrt(m!).
  const double x = S / std::sqrt(kappa);
  const double log_x = std::log(x);
  const double log_front = -std::log(2.0 * kappa);
  CompensatedSum acc;
  for (int m = M_max + 1;; ++m) {
    const double q = std::exp(log_front + m * log_x - 0.5 * log_factorial(m));
    const double ratio = x / std::sqrt(m + 1.0);
    if (ratio <= 0.5) {
      acc += q / (1.0 - ratio);
      return acc.value();
    }
    acc += q;
  }
}

LambdaBound lambda_bound(const PhysicsConfig& cfg, const EntireSeries& g, const EntireSeries& h,
                         double b, int M_max) {
  if (!(b > 0.0)) throw std::invalid_argument("lambda_bound: b must be > 0");
  if (M_max < 0) throw std::invalid_argument("lambda_bound: M_max must be >= 0");
  const double kappa = cfg.M() / (4.0 * cfg.hbar() * cfg.t());
  const double S = g.weighted_abs_sum(b) + h.weighted_abs_sum(b);

  LambdaBound out;
  CompensatedSum acc;
  acc += 1.0 / (2.0 * kappa);
  if (S > 0.0) {
    const double log_s = std::log(S);
    for (int m = 1; m <= M_max; ++m) {
      const double half = 0.5 * (m + 2);
      acc += std::exp(m * log_s - log_factorial(m) + ln_gamma(half) - std::log(2.0) -
                      half * std::log(kappa));
    }
  }
  out.partial = acc.value();
  out.terms = M_max + 1;
  out.tail = moment_series_tail(kappa, S, M_max);
  return out;
}

}  // namespace abshift
