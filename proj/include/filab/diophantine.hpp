// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "filab/circle.hpp"
#include "filab/scaling.hpp"

namespace filab {

using BigRational = boost::multiprecision::cpp_rational;

// A real number known to lie in [value - radius, value + radius].
// radius == 0 marks an exact rational input.
struct ExactReal {
  BigRational value;
  BigRational radius;

  static ExactReal exact(const BigRational& v) { return {v, 0}; }
  // The double itself, with a half-ulp precision tag.
  static ExactReal from_double(double x);
  // Accepts "p/q" (exact) or a decimal literal such as "1.6180339887" or
  // "2.5e-3" (radius half a unit in the last written digit).
  static ExactReal parse(const std::string& text);
  double approx() const;
};

struct ContinuedFraction {
  ExactReal x;
  std::vector<BigInt> quotients;
  std::vector<std::pair<BigInt, BigInt>> convergents;  // (p_i, q_i)
  bool rational = false;           // expansion terminated
  bool precision_limited = false;  // input precision exhausted before depth
};

// Gauss-map expansion, emitting a quotient only while it is determined by
// the input interval. Stops as rational when the remainder vanishes, when the
// next quotient of an inexact input would exceed 2^60, or when it is
// unresolvably large (the remainder interval reaches 0).
ContinuedFraction continued_fraction(const ExactReal& x, int depth);
ContinuedFraction continued_fraction(double x, int depth);

struct NuEstimate {
  double nu = 0.0;
  bool infinite = false;  // rational with denominator <= Qmax
  BigInt argmax_q;
  int convergents_used = 0;
  bool precision_limited = false;
};

inline const BigInt kDefaultQMin = 10000;

// nu_hat = 1 + max over convergent denominators q_n in [q_min, Qmax] of
// log(a_{n+1}) / log q_n, where a_{n+1} is the next partial quotient. Since
// ||q_n x|| = 1/(q_n (x_{n+1} + q_{n-1}/q_n)) this tracks
// log(1/||q_n x||)/log q_n without its additive O(1/log q) transient. With a
// fixed q_min the estimate is non-decreasing in Qmax.
NuEstimate diophantine_exponent_estimate(const ExactReal& x, const BigInt& qmax,
                                         const BigInt& q_min = kDefaultQMin);
NuEstimate diophantine_exponent_estimate(double x, const BigInt& qmax,
                                         const BigInt& q_min = kDefaultQMin);

// #{n in [-N, N] \ {0} : ||n x|| <= delta} by direct scan over 64-bit
// fixed-point multiples of x. Throws ResourceExceeded for N > 10^7.
std::uint64_t count_small_denominators(double x, std::uint64_t N, double delta);
std::uint64_t count_small_denominators(const ExactReal& x, std::uint64_t N, double delta);

inline constexpr std::uint64_t kMaxDirectScan = 10'000'000;

// Critical standard exponent 1/rho_1.
double nu_rho_dictionary(int k, double rho1);

struct JarnikExponents {
  double b = 0.0;
  std::vector<double> b_i;  // b_2..b_k
  double common = 0.0;
  bool all_positive = false;
};

JarnikExponents jarnik_exponents(const ScalingExponents& rho, double nu);

}  // namespace filab
