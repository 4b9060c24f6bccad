#pragma once

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <complex>
#include <cstdint>

namespace testing {

using Big = boost::multiprecision::cpp_bin_float_50;
using BigComplex = boost::multiprecision::cpp_complex_50;

// splitmix64; every property test seeds its own stream.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

// Ascending series of J_nu(z) in 50-digit arithmetic, principal branch.
inline std::complex<double> bessel_j_oracle(double nu, std::complex<double> z) {
  const BigComplex zz(Big(z.real()), Big(z.imag()));
  if (z == std::complex<double>(0.0, 0.0)) return nu == 0.0 ? 1.0 : 0.0;
  const BigComplex half = zz / Big(2);
  const BigComplex w = -half * half;
  BigComplex lead = exp(Big(nu) * log(half)) / Big(boost::multiprecision::tgamma(Big(nu) + 1));
  BigComplex term = lead, sum = lead;
  for (int l = 1; l < 400; ++l) {
    term = term * w / (Big(l) * (Big(nu) + Big(l)));
    sum += term;
    if (abs(term) < Big("1e-45") * abs(sum) && l > 4) break;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  const double scale = std::abs(want);
  return scale == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

}  // namespace testing
