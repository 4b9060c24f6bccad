#pragma once

#include <functional>

#include "abshift/abkernel.hpp"
#include "abshift/superosc.hpp"
#include "abshift/types.hpp"

namespace abshift {

/// Default radius of the A_1 sample disc.
inline constexpr double kDefaultSampleRadius = 4.0;

/// Index pair (m, l) of G_{m,l}(D_w) H_l(D_w), 0 <= l <= m.
struct OperatorIndex {
  OperatorIndex(int m, int l);

  int m;
  int l;
};

/*!
 * Lower estimate of the A_1 B-norm sup_w |f(w)| e^{-B|w|}.
 *
 * norm_estimate is the maximum over the first `samples` points of a Halton
 * sequence mapped onto the disc of radius sample_radius. The set starts at
 * w = 0 and is nested, so the estimate never drops as samples grow.
 */
struct A1Witness {
  EntireSeries series;
  double B = 1.0;
  double norm_estimate = 0.0;
  double sample_radius = kDefaultSampleRadius;
};

/// Area-uniform Halton (bases 2, 3) points in the disc, w = 0 first.
std::vector<Complex> disc_samples(int samples, double sample_radius);

double a1_norm_estimate(const EntireSeries& series, double B, int samples,
                        double sample_radius = kDefaultSampleRadius);

/// Same estimate for an arbitrary entire function given pointwise.
double a1_norm_estimate(const std::function<Complex(Complex)>& f, double B, int samples,
                        double sample_radius = kDefaultSampleRadius);

A1Witness a1_witness(const EntireSeries& series, double B, int samples,
                     double sample_radius = kDefaultSampleRadius);

/// Decay envelope of f; throws std::invalid_argument if every coefficient is zero.
DecayCertificate coeff_decay_certificate(const EntireSeries& series);

/// Value of G_{m,l}(D_w) H_l(D_w) f at w = 0 with its truncation bookkeeping.
struct OperatorAction {
  Complex value{};
  // Majorant of the multi-index terms with some index above the cutoff.
  double cutoff_tail = 0.0;
  // Number of total degrees S combined.
  int degrees = 0;
};

/*!
 * Coefficient action of G_{m,l}(D_w) H_l(D_w) on f at w = 0:
 *
 *   sum over u_1..u_{m-l}, v_1..v_l in [0, cutoff] of
 *     prod g_{u_p} / i^{u_p} * prod h_{v_q} / i^{v_q} * f_S * S!,   S = sum u + sum v.
 *
 * Terms are grouped by total degree S, which turns the nested sums into
 * repeated polynomial products. Throws NumericalError(cutoff_insufficient)
 * when the neglected-term majorant exceeds tol * max(1, |value|).
 */
OperatorAction operator_action(const EntireSeries& g, const EntireSeries& h, OperatorIndex idx,
                               const EntireSeries& f, int cutoff, double tol = 1e-8);

Complex operator_apply_at_zero(const EntireSeries& g, const EntireSeries& h, OperatorIndex idx,
                               const EntireSeries& f, int cutoff, double tol = 1e-8);

/// Right-hand side C_f (sum |g_u| b^u)^{m-l} (sum |h_v| b^v)^l of the operator estimate.
double operator_estimate(const EntireSeries& g, const EntireSeries& h, OperatorIndex idx,
                         const DecayCertificate& cert);

struct LambdaBound {
  double partial = 0.0;
  double tail = 0.0;
  int terms = 0;

  double total() const { return partial + tail; }
};

/*!
 * Lambda = sum_m (1/m!) Gamma((m+2)/2) / (2 kappa^{(m+2)/2}) S^m with
 * kappa = M / (4 hbar t) and S = sum |g_u| b^u + sum |h_v| b^v.
 *
 * `partial` stops at m = M_max; `tail` bounds the rest through
 * Gamma(m/2 + 1) <= sqrt(m!).
 */
LambdaBound lambda_bound(const PhysicsConfig& cfg, const EntireSeries& g, const EntireSeries& h,
                         double b, int M_max);

/*!
 * sum_{m > M_max} S^m / m! * Gamma((m+2)/2) / (2 kappa^{(m+2)/2}), bounded above
 * by its sqrt(m!) majorant (explicit terms, then a geometric remainder).
 */
double moment_series_tail(double kappa, double S, int M_max);

}  // namespace abshift
