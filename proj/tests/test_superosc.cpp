#include <cmath>

#include "abshift/superosc.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace abshift;

namespace {

// Y_n in 50-digit arithmetic straight from the definition.
Complex y_n_oracle(double x, double y, int n, double a, const std::vector<double>& g,
                   const std::vector<double>& h) {
  using testing::Big;
  using testing::BigComplex;
  auto poly = [](const std::vector<double>& c, const Big& lam) {
    Big acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * lam + Big(*it);
    return acc;
  };
  BigComplex sum(0);
  const Big p = (Big(1) + Big(a)) / 2, q = (Big(1) - Big(a)) / 2;
  Big binom = 1;
  for (int j = 0; j <= n; ++j) {
    const Big lam = Big(1) - Big(2 * j) / Big(n);
    const Big phase = poly(g, lam) * Big(x) + poly(h, lam) * Big(y);
    const Big c = binom * pow(p, n - j) * pow(q, j);
    sum += BigComplex(c * cos(phase), c * sin(phase));
    binom = binom * Big(n - j) / Big(j + 1);
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace

TEST_CASE("coeff_C examples and binomial sum") {
  CHECK(coeff_C(1, 0, 3.0) == doctest::Approx(2.0));
  CHECK(coeff_C(2, 1, 2.0) == doctest::Approx(-1.5).epsilon(1e-15));
  testing::Gen gen(21);
  for (int k = 0; k < 100; ++k) {
    const int n = gen.integer(1, 40);
    const double a = gen.uniform(-2.0, 2.0);
    double sum = 0.0, abs_sum = 0.0;
    for (double c : coeff_C_all(n, a)) {
      sum += c;
      abs_sum += std::abs(c);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-14 * abs_sum);
  }
  CHECK_THROWS_AS(coeff_C(3, 4, 1.5), std::invalid_argument);
  CHECK(std::isfinite(coeff_C(200, 100, 2.0)));
}

TEST_CASE("coeff_C matches exact binomials") {
  for (int n : {5, 17, 60}) {
    for (int j = 0; j <= n; ++j) {
      testing::Big want = 1;
      for (int i = 0; i < j; ++i) want = want * testing::Big(n - i) / testing::Big(i + 1);
      want *= pow(testing::Big("1.25"), n - j) * pow(testing::Big("-0.25"), j);
      CHECK(coeff_C(n, j, 1.5) == doctest::Approx(static_cast<double>(want)).epsilon(1e-13));
    }
  }
}

TEST_CASE("f_n examples") {
  for (int n : {1, 3, 10}) {
    // The C_j sum to one; rounding scales with the cancellation.
    const SumResult at0 = f_n(0.0, n, 1.7);
    CHECK(std::abs(at0.value - 1.0) <= 4.0 * at0.kappa * kEps);
  }
  for (double x : {-1.0, 0.3, 2.0}) {
    CHECK(std::abs(f_n(x, 9, 1.0).value - std::exp(Complex(0.0, x))) < 1e-15);
  }
  const SumResult s = f_n(0.1, 20, 1.5);
  CHECK(std::abs(s.value - std::exp(Complex(0.0, 0.15))) < 1e-3);
  CHECK(std::abs(s.value - y_n_oracle(0.1, 0.0, 20, 1.5, {0.0, 1.0}, {})) < 1e-13);
  CHECK(s.kappa >= 1.0);
}

TEST_CASE("f_n conjugate symmetry for real a and x") {
  testing::Gen gen(22);
  for (int k = 0; k < 100; ++k) {
    const double x = gen.uniform(-3.0, 3.0), a = gen.uniform(1.0, 2.0);
    const int n = gen.integer(1, 32);
    CHECK(std::abs(f_n(-x, n, a).value - std::conj(f_n(x, n, a).value)) < 1e-12);
  }
}

TEST_CASE("cancellation flag follows its definition") {
  const SumResult quiet = f_n(0.5, 4, 1.2);
  CHECK_FALSE(quiet.cancellation_warning);
  const SumResult loud = f_n(0.5, 60, 2.0, 1e-12);
  CHECK(loud.cancellation_warning == (loud.kappa * kEps > 1e-12));
}

TEST_CASE("y_n examples") {
  SuperoscSpec spec;
  spec.n = 16;
  spec.a = 1.3;
  const SumResult origin = y_n(0.0, 0.0, spec);
  CHECK(std::abs(origin.value - 1.0) <= 4.0 * origin.kappa * kEps);
  CHECK(std::abs(y_n(0.4, 0.9, spec).value - f_n(0.4, 16, 1.3).value) < 1e-15);

  spec.h = EntireSeries::polynomial({0.0, 0.0, 1.0});
  const Complex got = y_n(0.1, 0.2, spec).value;
  const Complex limit = std::exp(Complex(0.0, 1.3 * 0.1)) * std::exp(Complex(0.0, 1.69 * 0.2));
  SuperoscSpec coarse = spec;
  coarse.n = 4;
  CHECK(std::abs(got - limit) < std::abs(y_n(0.1, 0.2, coarse).value - limit));
  CHECK(std::abs(got - limit) < 2e-2);
  CHECK(std::abs(got - y_n_oracle(0.1, 0.2, 16, 1.3, {0.0, 1.0}, {0.0, 0.0, 1.0})) < 1e-13);
}

TEST_CASE("y_n converges pointwise on a grid") {
  SuperoscSpec spec;
  spec.a = 1.3;
  spec.h = EntireSeries::polynomial({0.0, 0.0, 1.0});
  for (double x : {-1.0, -0.3, 0.4, 1.0}) {
    for (double y : {-1.0, 0.2, 0.8}) {
      const Complex limit = std::exp(Complex(0.0, 1.3 * x)) * std::exp(Complex(0.0, 1.69 * y));
      double prev = INFINITY;
      for (int n : {4, 8, 16, 24, 32}) {
        spec.n = n;
        const SumResult s = y_n(x, y, spec);
        REQUIRE(s.kappa * kEps < 1e-3);
        const double err = std::abs(s.value - limit);
        if (n >= 8) CHECK(err < prev);
        prev = err;
      }
    }
  }
}

TEST_CASE("frequencies stay in [-1, 1]") {
  for (int n : {1, 2, 7, 32}) {
    for (double lam : superosc_frequencies(n)) {
      CHECK(lam >= -1.0);
      CHECK(lam <= 1.0);
    }
  }
}

TEST_CASE("SuperoscSpec validation") {
  SuperoscSpec spec;
  spec.a = 0.5;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.a = 1.5;
  spec.n = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.n = 3;
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("entire_eval") {
  CHECK(entire_eval(EntireSeries::identity(), 1.3) == Complex(1.3, 0.0));
  CHECK(entire_eval(EntireSeries::zero(), 2.0) == Complex(0.0, 0.0));
  CHECK(entire_eval(EntireSeries::polynomial({0.0, 0.0, 1.0}), 1.3).real() ==
        doctest::Approx(1.69).epsilon(1e-15));
}

TEST_CASE("decay envelope holds for every stored coefficient") {
  testing::Gen gen(23);
  for (int k = 0; k < 60; ++k) {
    std::vector<Complex> c(static_cast<std::size_t>(gen.integer(1, 25)));
    for (auto& v : c) v = Complex(gen.uniform(-3.0, 3.0), gen.uniform(-3.0, 3.0));
    const EntireSeries s(c);
    CHECK(s.satisfies_decay());
    for (std::size_t j = 0; j < c.size(); ++j) {
      CHECK(std::abs(c[j]) <= s.decay_C() * std::pow(s.decay_b(), j) / std::tgamma(j + 1.0) *
                                  (1.0 + 1e-12));
    }
  }
}

TEST_CASE("f_n_series reproduces f_n near the origin") {
  const EntireSeries s = f_n_series(12, 1.4, 40);
  for (double x : {0.0, 0.3, -0.7, 1.1}) {
    CHECK(std::abs(entire_eval(s, x) - f_n(x, 12, 1.4).value) < 1e-12);
  }
  CHECK_THROWS_AS(f_n_series(12, 1.4, 171), std::invalid_argument);
}
