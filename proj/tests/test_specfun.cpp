#include <cmath>

#include "abshift/specfun.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace abshift;
using testing::rel_err;

TEST_CASE("ln_gamma reproduces factorials and the half-integer value") {
  CHECK(ln_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ln_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  CHECK(ln_gamma(0.5) == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-14));
  double log_fact = 0.0;
  for (int n = 1; n <= 170; ++n) {
    CHECK(std::abs(ln_gamma(n + 1.0) - log_fact) <= 1e-12 * std::max(1.0, log_fact));
    log_fact += std::log(n + 1.0);
  }
}

TEST_CASE("ln_gamma relative error on (0, 200]") {
  testing::Gen gen(11);
  for (int k = 0; k < 2000; ++k) {
    const double x = k < 1000 ? gen.uniform(1e-6, 3.0) : gen.uniform(3.0, 200.0);
    const testing::Big oracle = boost::multiprecision::lgamma(testing::Big(x));
    const double want = static_cast<double>(oracle);
    const double err = std::abs(ln_gamma(x) - want);
    // Near the zeros at 1 and 2 fall back to an absolute comparison.
    CHECK(err <= 1e-12 * std::max(std::abs(want), 1e-2));
  }
}

TEST_CASE("ln_gamma rejects non-positive arguments") {
  CHECK_THROWS_AS(ln_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(ln_gamma(-1.5), std::domain_error);
}

TEST_CASE("bessel_j closed forms and oracle values") {
  CHECK(bessel_j(BesselOrder(0.0), 0.0).value == Complex(1.0, 0.0));
  CHECK(bessel_j(BesselOrder(0.0), 1.0).value.real() ==
        doctest::Approx(0.7651976865579666).epsilon(1e-15));
  CHECK(bessel_j(BesselOrder(0.5), 1.0).value.real() ==
        doctest::Approx(std::sqrt(2.0 / kPi) * std::sin(1.0)).epsilon(1e-14));
  CHECK(bessel_j(BesselOrder(2.0), 0.0).value == Complex(0.0, 0.0));
}

TEST_CASE("bessel_j matches the 50-digit series at complex arguments") {
  testing::Gen gen(3);
  for (int k = 0; k < 300; ++k) {
    const double nu = k % 3 == 0 ? gen.integer(0, 12) : gen.uniform(0.0, 12.0);
    const Complex z = std::polar(gen.uniform(0.01, 25.0), gen.uniform(-kPi, kPi));
    const BesselValue got = bessel_j(BesselOrder(nu), z);
    const Complex want = testing::bessel_j_oracle(nu, z);
    // Absolute scale: the largest series term bounds the attainable accuracy.
    const double scale = std::max(std::abs(want), 1e-300);
    CHECK(std::abs(got.value - want) <= 1e-13 * scale + 1e-15 * std::exp(std::abs(z.imag())));
  }
}

TEST_CASE("bessel_j at the rotated ray") {
  const Complex rot = std::polar(1.0, 0.25 * kPi);
  for (double u : {0.5, 3.0, 10.0, 20.0, 29.0}) {
    for (double nu : {0.0, 0.37, 1.63, 5.0}) {
      const Complex z = u * rot;
      CHECK(rel_err(bessel_j(BesselOrder(nu), z).value, testing::bessel_j_oracle(nu, z)) < 1e-12);
    }
  }
}

TEST_CASE("bessel_j errors") {
  CHECK_THROWS_AS(BesselOrder(-0.1), std::domain_error);
  CHECK_THROWS_AS(bessel_j(BesselOrder(0.0), 31.0), NumericalError);
  try {
    bessel_j(BesselOrder(0.0), 10.0, 3);
    FAIL("expected a tail error");
  } catch (const NumericalError& e) {
    CHECK(e.code() == ErrorCode::bessel_tail);
    CHECK(e.achieved() > 0.0);
  }
  CHECK_THROWS_AS(bessel_j(BesselOrder(0.0), 1.0, 0), std::invalid_argument);
}

TEST_CASE("fixed-term bessel_j reports a tail bound that covers the truncation") {
  const Complex z{4.0, 1.0};
  const Complex want = testing::bessel_j_oracle(1.5, z);
  for (int L = 12; L <= 30; L += 3) {
    const BesselValue v = bessel_j(BesselOrder(1.5), z, L, 1.0);
    CHECK(std::abs(v.value - want) <= v.tail_bound * (1.0 + 1e-12) + 1e-15);
  }
}

TEST_CASE("three-term recurrence on real arguments") {
  testing::Gen gen(5);
  for (int k = 0; k < 200; ++k) {
    const double x = gen.uniform(1e-3, 10.0);
    for (double nu : {1.0, 2.0, 3.0}) {
      const Complex lhs = bessel_j(BesselOrder(nu - 1.0), x).value +
                          bessel_j(BesselOrder(nu + 1.0), x).value;
      const Complex rhs = (2.0 * nu / x) * bessel_j(BesselOrder(nu), x).value;
      CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
  }
}

TEST_CASE("Gamma inequalities hold in log space") {
  for (int n = 0; n <= 60; ++n) {
    for (double q : {1.0, 1.5, 2.0, 4.0}) {
      CHECK(ln_gamma(n / q + 1.0) <= ln_gamma(n + 1.0) / q);
    }
  }
  testing::Gen gen(7);
  for (int k = 0; k < 500; ++k) {
    const double a = gen.uniform(0.0, 10.0), b = gen.uniform(0.0, 10.0);
    CHECK(ln_gamma(a + 1.0) + ln_gamma(b + 1.0) <= ln_gamma(a + b + 2.0));
  }
}

TEST_CASE("bessel_i identity and positivity") {
  CHECK(bessel_i(BesselOrder(0.0), 0.0).value == Complex(1.0, 0.0));
  const Complex i2 = bessel_i(BesselOrder(0.0), 2.0).value;
  CHECK(i2.real() >= 1.0);
  CHECK(i2.imag() == 0.0);
  CHECK(i2.real() == doctest::Approx(bessel_i0_real(2.0)).epsilon(1e-14));

  testing::Gen gen(9);
  for (int k = 0; k < 200; ++k) {
    const double x = gen.uniform(1e-3, 20.0);
    const int n = gen.integer(0, 8);
    const Complex v = bessel_i(BesselOrder(n), x).value;
    CHECK(v.real() >= 0.0);
    CHECK(std::abs(v.imag()) <= 1e-10 * std::abs(v.real()));
    const double nu = gen.uniform(0.0, 8.0);
    CHECK(bessel_i(BesselOrder(nu), x).value.real() >= 0.0);
    const Complex via_j = i_pow_neg(nu) * bessel_j(BesselOrder(nu), Complex(0.0, x)).value;
    CHECK(rel_err(bessel_i(BesselOrder(nu), x).value, via_j) < 1e-15);
  }
}

TEST_CASE("generating function sum_n I_n(1) tends to e") {
  double prev = 1.0;
  for (int N = 1; N <= 12; ++N) {
    double sum = bessel_i(BesselOrder(0.0), 1.0).value.real();
    for (int n = 1; n <= N; ++n) sum += 2.0 * bessel_i(BesselOrder(n), 1.0).value.real();
    CHECK(std::abs(sum - std::exp(1.0)) <= std::abs(prev - std::exp(1.0)));
    prev = sum;
  }
  CHECK(std::abs(prev - std::exp(1.0)) < 1e-13);
}

TEST_CASE("principal powers") {
  CHECK(principal_pow(0.0, 0.0) == Complex(1.0, 0.0));
  CHECK(principal_pow(0.0, 1.5) == Complex(0.0, 0.0));
  CHECK(rel_err(principal_pow(Complex(0.0, 1.0), 0.5), std::polar(1.0, 0.25 * kPi)) < 1e-15);
  CHECK(i_pow_neg(2.0) == Complex(-1.0, 0.0));
  CHECK(i_pow_neg(1.0) == Complex(0.0, -1.0));
  CHECK(rel_err(i_pow_neg(0.37), std::polar(1.0, -0.5 * kPi * 0.37)) < 1e-15);
}
