#pragma once

#include <vector>

#include "abshift/types.hpp"

namespace abshift {

/*!
 * Mass, Planck constant, time and flux of the Aharonov-Bohm problem.
 *
 * The flux splits as xi = xi_i + xi_f with xi_i = floor(xi), so xi_f lies in
 * [0, 1) and an integer flux has xi_f = 0.
 */
class PhysicsConfig {
 public:
  PhysicsConfig() : PhysicsConfig(1.0, 1.0, 1.0, 0.0) {}
  /// Throws NumericalError(singular_time) for t <= 0 and
  /// std::invalid_argument for non-positive M or hbar.
  PhysicsConfig(double M, double hbar, double t, double xi);

  double M() const { return M_; }
  double hbar() const { return hbar_; }
  double t() const { return t_; }
  double xi() const { return xi_; }
  int xi_i() const { return xi_i_; }
  double xi_f() const { return xi_f_; }

  /// M / (hbar t), the scale of the Bessel argument.
  double scale() const { return M_ / (hbar_ * t_); }
  /// Gaussian rate M / (2 hbar t) of the rotated integrals.
  double gamma() const { return 0.5 * scale(); }
  /// M / (2 pi hbar t).
  double prefactor() const { return scale() / (2.0 * kPi); }

 private:
  double M_, hbar_, t_, xi_;
  int xi_i_;
  double xi_f_;
};

/// Point in the plane in polar coordinates; phi is reduced to [0, 2 pi).
struct PolarPoint {
  PolarPoint() = default;
  PolarPoint(double r, double phi);

  double r = 0.0;
  double phi = 0.0;
};

/*!
 * Truncation of the winding sum over n in [-N, N].
 *
 * In adaptive mode N is grown from max(1, ceil|xi| + 1) until the tail bound
 * drops below tail_tol, and `N` is the cap; otherwise exactly `N` is used and
 * exceeding tail_tol is an error.
 */
struct WindingTruncation {
  int N = 200;
  double tail_tol = 1e-14;
  bool adaptive = true;
};

/*!
 * Winding coefficients B_n = i^{-|n-xi|} J_{|n-xi|}(z) for n in [-N, N] at a
 * fixed Bessel argument z, so F_xi(alpha) = sum_n e^{i n alpha} B_n.
 */
struct WindingCoefficients {
  int N = 0;
  std::vector<Complex> b;  // index n + N
  // Bound on sum over omitted |n| > N plus the Bessel series tails.
  double tail = 0.0;

  Complex at(int n) const { return b[static_cast<std::size_t>(n + N)]; }
  /// sum_n e^{i n alpha} B_n in the order n = 0, 1, -1, 2, -2, ...
  Complex sum(double alpha) const;
};

/// Rigorous bound on the winding terms with |n| > N at |z| = abs_z.
double winding_tail_bound(double xi, int N, double abs_z);

/// Smallest admissible N meeting tail_tol at |z|, or -1 if none up to cap.
int winding_cutoff(double xi, double abs_z, double tail_tol, int cap);

WindingCoefficients winding_coefficients(const PhysicsConfig& cfg, Complex z,
                                         const WindingTruncation& trunc);

/// F_xi together with its truncation bookkeeping.
struct KernelValue {
  Complex value{};
  double tail = 0.0;
  int N = 0;
};

/*!
 * F_xi(r, phi, theta, t, rho) = sum_n e^{i n (phi - theta)} i^{-|n-xi|}
 *                                 J_{|n-xi|}(M r rho / (hbar t)).
 *
 * rho may be complex (the rotated contour uses rho = u e^{i pi/4}).
 * Throws NumericalError(winding_tail) if the truncation cannot meet tail_tol.
 */
KernelValue f_xi(const PhysicsConfig& cfg, double r, double phi, double theta, Complex rho,
                 const WindingTruncation& trunc = {});

/*!
 * Closed-form majorant of |F_xi| valid for real rho = rho_mag and for
 * rho = rho_mag e^{i pi/4}:
 *
 *   e^y I_0(2y) { y^{1-xi_f} (3 + y) + y^{xi_f} (3 + 2y) },  y = M r rho / (4 hbar t).
 */
double f_xi_bound(const PhysicsConfig& cfg, double r, double rho_mag);

/// Propagator K(r, phi; rho, theta, t) = (M / 2 pi hbar t) e^{iM(rho^2+r^2)/(2 hbar t)} F_xi.
Complex kernel_K(const PhysicsConfig& cfg, const PolarPoint& target, const PolarPoint& source,
                 const WindingTruncation& trunc = {});

}  // namespace abshift
