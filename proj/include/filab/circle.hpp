// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace filab {

using BigInt = boost::multiprecision::cpp_int;

enum class Arith { float64, fixed64 };

Arith parse_arith(const std::string& s);
std::string to_string(Arith a);

// A point of R/Z held as an unevaluated sum hi + lo (double-double).
// Normalized: hi + lo lies in [0,1) and |lo| <= ulp(hi)/2.
struct DD {
  double hi = 0.0;
  double lo = 0.0;
  friend bool operator==(const DD&, const DD&) = default;
};

namespace circle {

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

inline void fast_two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  e = b - (s - a);
}

// Reduces hi + lo (any magnitude that fits a double) into [0,1).
inline DD normalize(double hi, double lo) {
  double s, e;
  fast_two_sum(hi, lo, s, e);
  const double f = std::floor(s);
  s -= f;  // exact for |s| < 2^52
  fast_two_sum(s, e, s, e);
  if (s < 0.0 || (s == 0.0 && e < 0.0)) {
    s += 1.0;
    fast_two_sum(s, e, s, e);
  }
  if (s >= 1.0) {
    s -= 1.0;
    fast_two_sum(s, e, s, e);
    if (s < 0.0) {
      s = 0.0;
      e = 0.0;
    }
  }
  return {s, e};
}

inline DD add(const DD& a, const DD& b) {
  double s, e;
  two_sum(a.hi, b.hi, s, e);
  e += a.lo + b.lo;
  return normalize(s, e);
}

inline DD neg(const DD& a) { return normalize(-a.hi, -a.lo); }

inline DD sub(const DD& a, const DD& b) { return add(a, neg(b)); }

inline DD from_double(double x) { return normalize(x, 0.0); }

// Value in [0,1) rounded to double.
inline double to_double(const DD& a) {
  const double v = a.hi + a.lo;
  return v >= 1.0 ? 0.0 : v;
}

// Signed representative in [-1/2, 1/2).
inline double to_turn(const DD& a) {
  double v = a.hi + a.lo;
  if (v >= 0.5) v -= 1.0;
  return v;
}

// Product with a small integer, reduced mod 1.
inline DD mul_small(const DD& a, std::int64_t m) {
  const double md = static_cast<double>(m);
  const double p = a.hi * md;
  const double pe = std::fma(a.hi, md, -p);
  const double f = std::floor(p);
  return normalize(p - f, pe + a.lo * md);
}

// Circle distance between two points of R/Z.
inline double distance(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

// Exact frac(n * x) for an integer n and a double x, rounded to DD.
DD frac_mul(const BigInt& n, double x);
DD frac_mul(std::int64_t n, double x);
DD frac_mul(const BigInt& n, const DD& x);

// 64-bit fixed-point fractions: raw value u represents u / 2^64.
std::uint64_t to_fixed(double x);
std::uint64_t to_fixed(const DD& x);
// Correctly rounded p/q mod 1.
std::uint64_t fixed_from_ratio(std::int64_t p, std::int64_t q);
inline double fixed_to_double(std::uint64_t u) {
  return std::ldexp(static_cast<double>(u >> 11), -53);
}
// Signed turn with 52 fractional bits, exact; shared by every kernel.
inline double fixed_to_turn(std::uint64_t u) {
  return std::ldexp(static_cast<double>(static_cast<std::int64_t>(u) >> 12), -52);
}
inline DD fixed_to_dd(std::uint64_t u) {
  const double hi = std::ldexp(static_cast<double>(u >> 11), -53);
  const double lo = std::ldexp(static_cast<double>(u & 0x7ffu), -64);
  return {hi, lo};
}

// Low 64 bits of an exact big integer (two's complement for negatives).
std::uint64_t low64(const BigInt& n);

BigInt binomial(std::uint64_t n, unsigned i);

}  // namespace circle
}  // namespace filab
