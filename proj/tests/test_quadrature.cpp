#include <cmath>

#include "abshift/quadrature.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace abshift;

namespace {

double gaussian_moment(int n, double gamma) {
  return std::tgamma(0.5 * (n + 1)) / (2.0 * std::pow(gamma, 0.5 * (n + 1)));
}

}  // namespace

TEST_CASE("Gauss-Legendre rule basics") {
  for (int n : {1, 2, 5, 20}) {
    const GaussRule rule = gauss_legendre(n);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for polynomials of degree 2n - 1.
    double moment = 0.0;
    for (int k = 0; k < n; ++k) moment += rule.weights[k] * std::pow(rule.nodes[k], 2 * n - 2);
    CHECK(moment == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
  const GaussRule comp = composite_gauss_legendre(45, 0.0, 3.0);
  CHECK(comp.nodes.size() == 60);
}

TEST_CASE("gauss_weighted_integral examples") {
  const QuadratureResult one = gauss_weighted_integral([](double) { return Complex(1.0); }, 1.0, {});
  CHECK(std::abs(one.value.real() - std::sqrt(kPi) / 2.0) <= one.error + 1e-15);
  CHECK(one.error < 1e-10);
  const QuadratureResult lin =
      gauss_weighted_integral([](double u) { return Complex(u); }, 1.0, {}, {1.0, 1.0, 0.0});
  CHECK(std::abs(lin.value.real() - 0.5) <= lin.error + 1e-15);
  const QuadratureResult cube = gauss_weighted_integral(
      [](double u) { return Complex(u * u * u); }, 2.0, {}, {1.0, 3.0, 0.0});
  CHECK(std::abs(cube.value.real() - 0.125) <= cube.error + 1e-15);
  CHECK(cube.error >= 0.0);
}

TEST_CASE("Gaussian moments for n <= 12") {
  for (double gamma : {0.5, 1.0, 2.0}) {
    for (int n = 0; n <= 12; ++n) {
      const QuadratureResult q = gauss_weighted_integral(
          [n](double u) { return Complex(std::pow(u, n)); }, gamma, {},
          {1.0, static_cast<double>(n), 0.0});
      const double want = gaussian_moment(n, gamma);
      CHECK(std::abs(q.value.real() - want) <= 1e-8 * want);
      CHECK(std::abs(q.value.real() - want) <= q.error + 1e-14 * want);
    }
  }
}

TEST_CASE("tail dominating the tolerance is an error") {
  QuadratureSpec spec;
  spec.u_max = 1.0;
  try {
    gauss_weighted_integral([](double) { return Complex(1.0); }, 1.0, spec);
    FAIL("expected a quadrature tail error");
  } catch (const NumericalError& e) {
    CHECK(e.code() == ErrorCode::quadrature_tail);
  }
}

TEST_CASE("gaussian_tail_bound is rigorous") {
  const GrowthMajorant m{2.0, 3.0, 1.5};
  for (double u0 : {4.0, 6.0, 8.0}) {
    const double bound = gaussian_tail_bound(1.0, u0, m);
    // Reference by a fine composite rule out to where the integrand is negligible.
    const GaussRule rule = composite_gauss_legendre(2000, u0, u0 + 20.0);
    double ref = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double u = rule.nodes[k];
      ref += rule.weights[k] * std::exp(-u * u) * m(u);
    }
    CHECK(ref <= bound);
  }
  CHECK(std::isinf(gaussian_tail_bound(1.0, 0.1, m)));
}

TEST_CASE("periodic_integral examples") {
  auto cos2 = [](double t) { return Complex(std::cos(t) * std::cos(t)); };
  CHECK(periodic_integral(cos2, 16).real() == doctest::Approx(kPi).epsilon(1e-15));
  for (int k : {1, 3, 7}) {
    auto wave = [k](double t) { return std::polar(1.0, k * t); };
    CHECK(std::abs(periodic_integral(wave, 16)) < 1e-14);
  }
  auto cs = [](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return Complex(c * c * s * s);
  };
  CHECK(periodic_integral(cs, 16).real() == doctest::Approx(kPi / 4.0).epsilon(1e-15));
}

TEST_CASE("trapezoid is exact on trigonometric polynomials of degree < n/2") {
  testing::Gen gen(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 * gen.integer(4, 16);
    std::vector<Complex> c(static_cast<std::size_t>(n / 2));
    for (auto& v : c) v = Complex(gen.uniform(-1, 1), gen.uniform(-1, 1));
    auto f = [&](double t) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * std::polar(1.0, double(k) * t);
      return acc;
    };
    CHECK(std::abs(periodic_integral(f, n) - 2.0 * kPi * c[0]) < 1e-13);
  }
}

TEST_CASE("psi_direct at the origin with zero flux equals i") {
  const PhysicsConfig cfg(1.0, 1.0, 1.0, 0.0);
  const FieldValue psi = psi_direct(cfg, 0.0, 0.0, PolarPoint(0.0, 0.0));
  CHECK(std::abs(psi.value - Complex(0.0, 1.0)) < 1e-10);
  CHECK(std::abs(psi.value - Complex(0.0, 1.0)) <= psi.error + 1e-12);
}

TEST_CASE("psi_direct vanishes at the origin for fractional flux") {
  const PhysicsConfig cfg(1.0, 1.0, 1.0, 0.37);
  const FieldValue psi = psi_direct(cfg, 0.4, -0.2, PolarPoint(0.0, 0.0));
  CHECK(std::abs(psi.value) < 1e-12);
}

TEST_CASE("psi_direct is stable under node doubling") {
  const PhysicsConfig cfg(1.0, 1.0, 1.0, 0.37);
  QuadratureSpec spec;
  spec.n_theta = 64;
  spec.n_u = 200;
  const FieldValue a = psi_direct(cfg, 0.8, 0.3, PolarPoint(0.9, 1.0), {}, spec);
  const FieldValue b = psi_direct(cfg, 0.8, 0.3, PolarPoint(0.9, 1.0), {}, spec.doubled());
  CHECK(std::abs(a.value - b.value) <= a.error);
  CHECK(b.diagnostics.node_doubling <= a.diagnostics.node_doubling);
  CHECK(a.error < 1e-7);
}

TEST_CASE("QuadratureSpec validation") {
  QuadratureSpec spec;
  spec.n_theta = 7;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.n_theta = 2;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.n_theta = 8;
  spec.n_u = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("plane-wave rate bounds the rotated exponential") {
  testing::Gen gen(42);
  const Complex rot = std::polar(1.0, 0.25 * kPi);
  for (int k = 0; k < 200; ++k) {
    const bool real = k % 2 == 0;
    const Complex a(gen.uniform(-2, 2), real ? 0.0 : gen.uniform(-1, 1));
    const Complex b(gen.uniform(-2, 2), real ? 0.0 : gen.uniform(-1, 1));
    const double u = gen.uniform(0.0, 10.0), th = gen.uniform(0.0, 2.0 * kPi);
    const double mag =
        std::abs(std::exp(Complex(0.0, 1.0) * u * rot * (a * std::cos(th) + b * std::sin(th))));
    CHECK(mag <= std::exp(plane_wave_rate(a, b) * u) * (1.0 + 1e-12));
  }
}
