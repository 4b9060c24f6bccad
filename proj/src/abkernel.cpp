#include "abshift/abkernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "abshift/compensated.hpp"
#include "abshift/specfun.hpp"

namespace abshift {

namespace {

int minimal_cutoff(double xi) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(xi))) + 1);
}

// sum_{k>=0} T(nu0 + k) with T(nu) = (x/2)^nu / Gamma(nu+1) * exp(x^2 / (4 (nu+1)))
// dominating |J_nu(z)| for |z| = x.
double order_tail(double nu0, double x) {
  if (x == 0.0) return 0.0;
  const double half = 0.5 * x;
  double total = 0.0;
  for (double nu = nu0;; nu += 1.0) {
    const double log_t = nu * std::log(half) - ln_gamma(nu + 1.0) + x * x / (4.0 * (nu + 1.0));
    const double t = std::exp(log_t);
    const double ratio = half / (nu + 1.0);
    if (ratio < 0.5) return total + t / (1.0 - ratio);
    total += t;
  }
}

}  // namespace

PhysicsConfig::PhysicsConfig(double M, double hbar, double t, double xi)
    : M_(M), hbar_(hbar), t_(t), xi_(xi) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw NumericalError(ErrorCode::singular_time, "singular time: t must be > 0", t);
  }
  if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("mass M must be > 0");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("hbar must be > 0");
  if (!std::isfinite(xi)) throw std::invalid_argument("flux xi must be finite");
  const double fl = std::floor(xi);
  xi_i_ = static_cast<int>(fl);
  xi_f_ = xi - fl;
}

PolarPoint::PolarPoint(double r_in, double phi_in) : r(r_in), phi(phi_in) {
  if (!(r_in >= 0.0) || !std::isfinite(r_in)) {
    throw std::invalid_argument("polar radius must be finite and >= 0");
  }
  if (!std::isfinite(phi_in)) throw std::invalid_argument("polar angle must be finite");
  phi = std::fmod(phi_in, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
}

Complex WindingCoefficients::sum(double alpha) const {
  ComplexCompensatedSum acc;
  acc += at(0);
  for (int n = 1; n <= N; ++n) {
    acc += std::polar(1.0, n * alpha) * at(n);
    acc += std::polar(1.0, -n * alpha) * at(-n);
  }
  return acc.value();
}

double winding_tail_bound(double xi, int N, double abs_z) {
  if (N < minimal_cutoff(xi)) return std::numeric_limits<double>::infinity();
  // n > N contributes orders n - xi, n < -N contributes xi - n.
  return order_tail(N + 1 - xi, abs_z) + order_tail(N + 1 + xi, abs_z);
}

int winding_cutoff(double xi, double abs_z, double tail_tol, int cap) {
  for (int N = minimal_cutoff(xi); N <= cap; ++N) {
    if (winding_tail_bound(xi, N, abs_z) <= tail_tol) return N;
  }
  return -1;
}

WindingCoefficients winding_coefficients(const PhysicsConfig& cfg, Complex z,
                                         const WindingTruncation& trunc) {
  const double xi = cfg.xi();
  const double abs_z = std::abs(z);
  WindingCoefficients out;
  if (trunc.adaptive) {
    out.N = winding_cutoff(xi, abs_z, trunc.tail_tol, trunc.N);
    if (out.N < 0) {
      const double achieved = winding_tail_bound(xi, trunc.N, abs_z);
      throw NumericalError(ErrorCode::winding_tail,
                           "winding tail not converged: tail " + std::to_string(achieved) +
                               " at N = " + std::to_string(trunc.N),
                           achieved);
    }
  } else {
    out.N = trunc.N;
  }
  out.tail = winding_tail_bound(xi, out.N, abs_z);
  if (!trunc.adaptive && !(out.tail <= trunc.tail_tol)) {
    throw NumericalError(ErrorCode::winding_tail,
                         "winding tail not converged: tail " + std::to_string(out.tail) +
                             " at N = " + std::to_string(out.N),
                         out.tail);
  }

  out.b.resize(static_cast<std::size_t>(2 * out.N + 1));
  for (int n = -out.N; n <= out.N; ++n) {
    const double nu = std::abs(n - xi);
    const BesselValue j = bessel_j(BesselOrder(nu), z);
    out.b[static_cast<std::size_t>(n + out.N)] = i_pow_neg(nu) * j.value;
    out.tail += j.tail_bound;
  }
  return out;
}

KernelValue f_xi(const PhysicsConfig& cfg, double r, double phi, double theta, Complex rho,
                 const WindingTruncation& trunc) {
  const Complex z = cfg.scale() * r * rho;
  const WindingCoefficients coeffs = winding_coefficients(cfg, z, trunc);
  return {coeffs.sum(phi - theta), coeffs.tail, coeffs.N};
}

double f_xi_bound(const PhysicsConfig& cfg, double r, double rho_mag) {
  if (!(rho_mag >= 0.0)) throw std::invalid_argument("f_xi_bound: rho_mag must be >= 0");
  const double y = 0.25 * cfg.scale() * r * rho_mag;
  const double xf = cfg.xi_f();
  const double poly = std::pow(y, 1.0 - xf) * (3.0 + y) + std::pow(y, xf) * (3.0 + 2.0 * y);
  return std::exp(y) * bessel_i0_real(2.0 * y) * poly;
}

Complex kernel_K(const PhysicsConfig& cfg, const PolarPoint& target, const PolarPoint& source,
                 const WindingTruncation& trunc) {
  const double rho = source.r;
  const KernelValue f = f_xi(cfg, target.r, target.phi, source.phi, rho, trunc);
  const Complex phase = std::polar(1.0, cfg.gamma() * (rho * rho + target.r * target.r));
  return cfg.prefactor() * phase * f.value;
}

}  // namespace abshift
