#pragma once

#include <functional>
#include <vector>

#include "abshift/abkernel.hpp"
#include "abshift/types.hpp"

namespace abshift {

/// Nodes per Gauss-Legendre panel of the composite radial rule.
inline constexpr int kPanelOrder = 20;

/*!
 * Node counts and tolerance for the (theta, u) quadrature.
 *
 * n_theta uniform nodes on [0, 2 pi); n_u composite Gauss-Legendre nodes on
 * [0, u_max], rounded up to whole panels. u_max <= 0 selects the cutoff
 * automatically from the integrand majorant.
 */
struct QuadratureSpec {
  int n_theta = 64;
  int n_u = 160;
  double u_max = 0.0;
  double tol = 1e-10;

  /// Throws std::invalid_argument unless n_theta >= 4 is even and n_u >= 1.
  void validate() const;
  /// Same spec with both node counts doubled.
  QuadratureSpec doubled() const;
};

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int n);

/// Composite rule on [lo, hi] with ceil(n_nodes / kPanelOrder) equal panels.
GaussRule composite_gauss_legendre(int n_nodes, double lo, double hi);

/// Growth model |f(u)| <= coeff (1 + u)^power e^{rate u}.
struct GrowthMajorant {
  double coeff = 1.0;
  double power = 0.0;
  double rate = 0.0;

  double operator()(double u) const;
};

/*!
 * Rigorous bound on int_{u0}^inf e^{-gamma u^2} m(u) du for a growth majorant m.
 *
 * The log-integrand is concave, so past the point where its slope turns
 * negative the tail is at most integrand(u0) / |slope(u0)|. Returns +inf when
 * u0 is not yet past the peak.
 */
double gaussian_tail_bound(double gamma, double u0, const GrowthMajorant& m);

struct QuadratureResult {
  Complex value{};
  // node-doubling difference + tail
  double error = 0.0;
  double tail = 0.0;
  double u_max = 0.0;
  int nodes = 0;
};

/*!
 * int_0^inf e^{-gamma u^2} f(u) du by composite Gauss-Legendre on [0, u_max]
 * applied to the damped product.
 *
 * `majorant` must dominate |f| beyond u_max; it also drives the automatic
 * cutoff. Throws NumericalError(quadrature_tail) if the tail bound exceeds
 * spec.tol.
 */
QuadratureResult gauss_weighted_integral(const std::function<Complex(double)>& f, double gamma,
                                         const QuadratureSpec& spec,
                                         const GrowthMajorant& majorant = {});

/// Trapezoid rule on n_theta uniform nodes of [0, 2 pi).
Complex periodic_integral(const std::function<Complex(double)>& f, int n_theta);

/// Uniform angular nodes 2 pi k / n_theta.
std::vector<double> periodic_nodes(int n_theta);

/*!
 * Majorant of |F_xi(r, ., ., t, u e^{i pi/4})| * u * |e^{i u e^{i pi/4} c}|,
 * |c| <= exp_rate, in GrowthMajorant form (uses I_0(x) <= e^x).
 */
GrowthMajorant rotated_integrand_majorant(const PhysicsConfig& cfg, double r, double exp_rate);

/*!
 * Radial cutoff: smallest u past which
 *   e^{-gamma u^2} f_xi_bound(u) u^power e^{exp_rate u} < threshold.
 */
double choose_u_max(const PhysicsConfig& cfg, double r, double exp_rate, double power,
                    double threshold);

/*!
 * Fresnel-rotated solution
 *
 *   psi_{a,b}(r, phi, t) = i (M / 2 pi hbar t) e^{i M r^2 / (2 hbar t)}
 *     int_0^{2pi} int_0^inf F_xi(r, phi, theta, t, u e^{i pi/4}) e^{-M u^2 / (2 hbar t)}
 *                           e^{i u e^{i pi/4} (a cos theta + b sin theta)} u du dtheta.
 *
 * The error combines the node-doubling difference, the analytic radial tail
 * and the winding/Bessel truncation tails.
 */
FieldValue psi_direct(const PhysicsConfig& cfg, Complex a, Complex b, const PolarPoint& target,
                      const WindingTruncation& trunc = {}, const QuadratureSpec& spec = {});

/// Rate s with |e^{i u e^{i pi/4}(a cos + b sin)}| <= e^{s u}.
double plane_wave_rate(Complex a, Complex b);

}  // namespace abshift
