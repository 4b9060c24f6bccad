#include "abshift/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "abshift/compensated.hpp"
#include "abshift/specfun.hpp"

namespace abshift {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440084436210485;

// Step of the radial cutoff scan.
constexpr double kCutoffStep = 0.125;

double log_growth(const GrowthMajorant& m, double u) {
  return std::log(m.coeff) + m.power * std::log1p(u) + m.rate * u;
}

struct RotatedSum {
  Complex value{};
  double condition_number = 1.0;
  double winding_tail = 0.0;
  int nodes = 0;
};

// The double integral without the i M/(2 pi hbar t) e^{iMr^2/(2hbar t)} prefactor.
RotatedSum rotated_integral(const PhysicsConfig& cfg, Complex a, Complex b,
                            const PolarPoint& target, const WindingTruncation& trunc,
                            int n_theta, const GaussRule& rule) {
  const Complex rot = std::polar(1.0, 0.25 * kPi);
  const Complex i{0.0, 1.0};
  const double gamma = cfg.gamma();
  const double h = 2.0 * kPi / n_theta;
  const double s = plane_wave_rate(a, b);
  const auto thetas = periodic_nodes(n_theta);

  std::vector<double> cos_t(thetas.size()), sin_t(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    cos_t[k] = std::cos(thetas[k]);
    sin_t[k] = std::sin(thetas[k]);
  }

  ComplexCompensatedSum acc;
  CompensatedSum tail;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double u = rule.nodes[q];
    const double radial = rule.weights[q] * std::exp(-gamma * u * u) * u;
    const WindingCoefficients wc = winding_coefficients(cfg, cfg.scale() * target.r * u * rot, trunc);
    tail += radial * std::exp(s * u) * wc.tail * 2.0 * kPi;
    const Complex iu = i * u * rot;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      const Complex F = wc.sum(target.phi - thetas[k]);
      const Complex wave = std::exp(iu * (a * cos_t[k] + b * sin_t[k]));
      acc += (radial * h) * F * wave;
    }
  }
  return {acc.value(), acc.condition_number(), tail.value(),
          static_cast<int>(rule.nodes.size() * thetas.size())};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (n_theta < 4 || n_theta % 2 != 0) {
    throw std::invalid_argument("QuadratureSpec: n_theta must be even and >= 4");
  }
  if (n_u < 1) throw std::invalid_argument("QuadratureSpec: n_u must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("QuadratureSpec: tol must be > 0");
}

QuadratureSpec QuadratureSpec::doubled() const {
  QuadratureSpec d = *this;
  d.n_theta *= 2;
  d.n_u *= 2;
  return d;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    // Newton on P_n from the Tricomi initial guess.
    double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    const double pn = n == 1 ? x : p1;
    const double pnm1 = n == 1 ? 1.0 : p0;
    dp = n * (x * pn - pnm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = -x;
    rule.nodes[n - 1 - k] = x;
    rule.weights[k] = w;
    rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GaussRule composite_gauss_legendre(int n_nodes, double lo, double hi) {
  const int order = std::min(n_nodes, kPanelOrder);
  const int panels = (n_nodes + kPanelOrder - 1) / kPanelOrder;
  const GaussRule base = gauss_legendre(order);
  const double width = (hi - lo) / panels;
  GaussRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels * order));
  rule.weights.reserve(static_cast<std::size_t>(panels * order));
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    for (int k = 0; k < order; ++k) {
      rule.nodes.push_back(mid + 0.5 * width * base.nodes[k]);
      rule.weights.push_back(0.5 * width * base.weights[k]);
    }
  }
  return rule;
}

double GrowthMajorant::operator()(double u) const { return std::exp(log_growth(*this, u)); }

double gaussian_tail_bound(double gamma, double u0, const GrowthMajorant& m) {
  if (m.coeff == 0.0) return 0.0;
  const double slope = m.power / (1.0 + u0) - 2.0 * gamma * u0 + m.rate;
  if (!(slope < 0.0)) return std::numeric_limits<double>::infinity();
  return std::exp(log_growth(m, u0) - gamma * u0 * u0) / (-slope);
}

QuadratureResult gauss_weighted_integral(const std::function<Complex(double)>& f, double gamma,
                                         const QuadratureSpec& spec,
                                         const GrowthMajorant& majorant) {
  spec.validate();
  if (!(gamma > 0.0)) throw std::invalid_argument("gauss_weighted_integral: gamma must be > 0");

  double u_max = spec.u_max;
  if (!(u_max > 0.0)) {
    u_max = kCutoffStep;
    while (gaussian_tail_bound(gamma, u_max, majorant) > 1e-2 * spec.tol) u_max += kCutoffStep;
  }

  auto integrate = [&](int n_nodes) {
    const GaussRule rule = composite_gauss_legendre(n_nodes, 0.0, u_max);
    ComplexCompensatedSum acc;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double u = rule.nodes[k];
      acc += rule.weights[k] * std::exp(-gamma * u * u) * f(u);
    }
    return acc.value();
  };

  QuadratureResult out;
  out.u_max = u_max;
  out.value = integrate(spec.n_u);
  const Complex refined = integrate(2 * spec.n_u);
  out.tail = gaussian_tail_bound(gamma, u_max, majorant);
  out.error = std::abs(refined - out.value) + out.tail;
  out.nodes = ((spec.n_u + kPanelOrder - 1) / kPanelOrder) * std::min(spec.n_u, kPanelOrder);
  if (out.tail > spec.tol) {
    throw NumericalError(ErrorCode::quadrature_tail,
                         "tail dominates tolerance: u_max = " + std::to_string(u_max) +
                             " leaves tail " + std::to_string(out.tail),
                         out.tail);
  }
  return out;
}

std::vector<double> periodic_nodes(int n_theta) {
  if (n_theta < 1) throw std::invalid_argument("periodic_nodes: n_theta must be >= 1");
  std::vector<double> t(static_cast<std::size_t>(n_theta));
  for (int k = 0; k < n_theta; ++k) t[k] = 2.0 * kPi * k / n_theta;
  return t;
}

Complex periodic_integral(const std::function<Complex(double)>& f, int n_theta) {
  const auto thetas = periodic_nodes(n_theta);
  ComplexCompensatedSum acc;
  for (double th : thetas) acc += f(th);
  return acc.value() * (2.0 * kPi / n_theta);
}

double plane_wave_rate(Complex a, Complex b) {
  const bool real = a.imag() == 0.0 && b.imag() == 0.0;
  const double mag = std::abs(a) + std::abs(b);
  return real ? kSqrtHalf * mag : mag;
}

GrowthMajorant rotated_integrand_majorant(const PhysicsConfig& cfg, double r, double exp_rate) {
  // f_xi_bound <= e^{3y} 6 (1 + y)^2 with y = kappa u, and (1 + kappa u) <= max(1, kappa)(1 + u);
  // the extra factor u <= 1 + u.
  const double kappa = 0.25 * cfg.scale() * r;
  const double lift = std::max(1.0, kappa);
  return {6.0 * lift * lift, 3.0, 3.0 * kappa + exp_rate};
}

double choose_u_max(const PhysicsConfig& cfg, double r, double exp_rate, double power,
                    double threshold) {
  const double gamma = cfg.gamma();
  const double log_threshold = std::log(threshold);
  // Scan until the Gaussian has certainly won, remembering the last violation.
  const double kappa = 0.25 * cfg.scale() * r;
  const double stop = std::sqrt((800.0 + std::abs(log_threshold)) / gamma) +
                      (3.0 * kappa + exp_rate) / gamma + power;
  double last_violation = 0.0;
  for (double u = kCutoffStep; u <= stop; u += kCutoffStep) {
    const double log_value = -gamma * u * u + std::log(f_xi_bound(cfg, r, u)) +
                             power * std::log(u) + exp_rate * u;
    if (log_value >= log_threshold) last_violation = u;
  }
  return last_violation + kCutoffStep;
}

FieldValue psi_direct(const PhysicsConfig& cfg, Complex a, Complex b, const PolarPoint& target,
                      const WindingTruncation& trunc, const QuadratureSpec& spec) {
  spec.validate();
  const double s = plane_wave_rate(a, b);
  double u_max = spec.u_max;
  const GrowthMajorant majorant = rotated_integrand_majorant(cfg, target.r, s);
  if (!(u_max > 0.0)) {
    u_max = choose_u_max(cfg, target.r, s, 1.0, 1e-2 * spec.tol);
    // The scan can stop early where f_xi_bound vanishes; the rigorous tail has the last word.
    while (2.0 * kPi * cfg.prefactor() * gaussian_tail_bound(cfg.gamma(), u_max, majorant) >
           1e-2 * spec.tol) {
      u_max += kCutoffStep;
    }
  }

  const QuadratureSpec fine = spec.doubled();
  const RotatedSum coarse_sum = rotated_integral(cfg, a, b, target, trunc, spec.n_theta,
                                                 composite_gauss_legendre(spec.n_u, 0.0, u_max));
  const RotatedSum fine_sum = rotated_integral(cfg, a, b, target, trunc, fine.n_theta,
                                               composite_gauss_legendre(fine.n_u, 0.0, u_max));

  const Complex pre = Complex{0.0, 1.0} * cfg.prefactor() *
                      std::polar(1.0, cfg.gamma() * target.r * target.r);
  const double pre_abs = cfg.prefactor();
  const double tail =
      2.0 * kPi * gaussian_tail_bound(cfg.gamma(), u_max, majorant);

  FieldValue out;
  out.value = pre * fine_sum.value;
  out.diagnostics.node_doubling = pre_abs * std::abs(fine_sum.value - coarse_sum.value);
  out.diagnostics.quadrature_tail = pre_abs * tail;
  out.diagnostics.winding_tail = pre_abs * fine_sum.winding_tail;
  out.diagnostics.condition_number = fine_sum.condition_number;
  out.diagnostics.terms_used = fine_sum.nodes;
  out.error = out.diagnostics.node_doubling + out.diagnostics.quadrature_tail +
              out.diagnostics.winding_tail;
  if (out.diagnostics.quadrature_tail > spec.tol) {
    throw NumericalError(ErrorCode::quadrature_tail,
                         "psi_direct: tail dominates tolerance", out.diagnostics.quadrature_tail);
  }
  return out;
}

}  // namespace abshift
