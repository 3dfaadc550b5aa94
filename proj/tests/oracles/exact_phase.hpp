// SPDX-License-Identifier: Apache-2.0
// Exact-integer phase oracles for the fixed-point and rational Weyl sums.
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using boost::multiprecision::cpp_int;

inline cpp_int binom(std::uint64_t n, unsigned i) {
  cpp_int num = 1, den = 1;
  for (unsigned j = 0; j < i; ++j) {
    if (n < j) return 0;
    num *= n - j;
    den *= j + 1;
  }
  return num / den;
}

// ell * sum_i c_i C(n, i) mod 2^64, where c_i are 64-bit fractions of a turn.
inline std::uint64_t fixed_phase(const std::vector<std::uint64_t>& c, std::uint64_t n,
                                 std::int64_t ell = 1) {
  const cpp_int mod = cpp_int(1) << 64;
  cpp_int acc = 0;
  for (unsigned i = 0; i < c.size(); ++i) acc += cpp_int(c[i]) * binom(n, i);
  acc *= ell;
  acc %= mod;
  if (acc < 0) acc += mod;
  return static_cast<std::uint64_t>(acc);
}

// sum_{n<N} e(sum_d num[d] n^d / den), num ascending by degree. Phases are
// reduced exactly in integers before the exponential.
inline std::complex<double> rational_weyl_sum(const std::vector<std::int64_t>& num,
                                              std::int64_t den, std::uint64_t N) {
  std::complex<double> acc{0.0, 0.0};
  for (std::uint64_t n = 0; n < N; ++n) {
    cpp_int p = 0, pw = 1;
    for (auto a : num) {
      p += a * pw;
      pw *= n;
    }
    cpp_int r = p % den;
    if (r < 0) r += den;
    const double turn = static_cast<double>(r.convert_to<std::int64_t>()) / static_cast<double>(den);
    acc += std::polar(1.0, 2.0 * std::numbers::pi * turn);
  }
  return acc;
}

}  // namespace oracle
