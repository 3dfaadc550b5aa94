// SPDX-License-Identifier: Apache-2.0
#include "filab/circle.hpp"

#include "filab/error.hpp"

namespace filab {

Arith parse_arith(const std::string& s) {
  if (s == "float64" || s == "float") return Arith::float64;
  if (s == "fixed64" || s == "fixed") return Arith::fixed64;
  throw InvalidParameter("unknown arithmetic mode: " + s);
}

std::string to_string(Arith a) {
  return a == Arith::float64 ? "float64" : "fixed64";
}

namespace circle {

namespace {

using boost::multiprecision::cpp_int;

// r * 2^shift (shift < 0) as a DD; r is a non-negative integer < 2^-shift.
DD scaled_to_dd(const cpp_int& r, int shift) {
  if (r == 0) return {0.0, 0.0};
  const double hi_full = std::ldexp(r.convert_to<double>(), shift);
  // Remainder after removing the rounded high part, computed exactly.
  int e = 0;
  std::frexp(hi_full, &e);
  const int ulp_exp = e - 53;  // hi_full is an integer multiple of 2^ulp_exp
  cpp_int hi_int;
  if (ulp_exp - shift >= 0) {
    const double m = std::ldexp(hi_full, -ulp_exp);
    hi_int = cpp_int(static_cast<std::int64_t>(m)) << (ulp_exp - shift);
  } else {
    hi_int = r;
  }
  const cpp_int rem = r - hi_int;
  const double lo = std::ldexp(rem.convert_to<double>(), shift);
  return normalize(hi_full, lo);
}

}  // namespace

std::uint64_t low64(const BigInt& n) {
  const BigInt mask = (BigInt(1) << 64) - 1;
  BigInt m = n & mask;
  if (n < 0) {
    // cpp_int stores sign-magnitude; reduce mod 2^64 explicitly.
    BigInt mod = BigInt(1) << 64;
    BigInt r = n % mod;
    if (r < 0) r += mod;
    m = r;
  }
  return m.convert_to<std::uint64_t>();
}

BigInt binomial(std::uint64_t n, unsigned i) {
  if (i > n) return 0;
  BigInt num = 1;
  for (unsigned j = 0; j < i; ++j) {
    num *= (n - j);
    num /= (j + 1);
  }
  return num;
}

DD frac_mul(const BigInt& n, double x) {
  if (n == 0 || x == 0.0 || !std::isfinite(x)) return {0.0, 0.0};
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5,1)
  const auto mi = static_cast<std::int64_t>(std::ldexp(m, 53));
  const int shift = e - 53;  // x = mi * 2^shift
  if (shift >= 0) return {0.0, 0.0};
  const int bits = -shift;
  const BigInt an = abs(n);
  if (bits <= 127 && boost::multiprecision::msb(an) < 64) {
    using u128 = unsigned __int128;
    const bool neg = (n < 0) != (mi < 0);
    const u128 prod = static_cast<u128>(an.convert_to<std::uint64_t>()) *
                      static_cast<u128>(mi < 0 ? -mi : mi);  // < 2^117, exact
    const u128 mod = u128(1) << bits;
    u128 r = prod & (mod - 1);
    if (neg && r != 0) r = mod - r;
    // r = a*2^64 + b*2^32 + c with each part exactly representable.
    const double a = static_cast<double>(static_cast<std::uint64_t>(r >> 64));
    const double b = static_cast<double>(static_cast<std::uint64_t>(r >> 32) & 0xffffffffu);
    const double c = static_cast<double>(static_cast<std::uint64_t>(r) & 0xffffffffu);
    double s, err, s2, err2;
    two_sum(std::ldexp(a, 64 + shift), std::ldexp(b, 32 + shift), s, err);
    two_sum(s, std::ldexp(c, shift), s2, err2);
    return normalize(s2, err + err2);
  }
  const cpp_int mod = cpp_int(1) << bits;
  cpp_int r = (n * cpp_int(mi)) % mod;
  if (r < 0) r += mod;
  return scaled_to_dd(r, shift);
}

DD frac_mul(std::int64_t n, double x) { return frac_mul(BigInt(n), x); }

DD frac_mul(const BigInt& n, const DD& x) {
  return add(frac_mul(n, x.hi), frac_mul(n, x.lo));
}

std::uint64_t to_fixed(double x) {
  if (!std::isfinite(x)) throw InvalidParameter("non-finite circle coordinate");
  const double r = x - std::floor(x);
  const double scaled = std::nearbyint(std::ldexp(r, 64));
  if (scaled >= 18446744073709551616.0) return 0;
  return static_cast<std::uint64_t>(scaled);
}

std::uint64_t to_fixed(const DD& x) {
  // hi carries the leading bits; lo adds a signed correction.
  const std::uint64_t h = to_fixed(x.hi);
  const double lo_scaled = std::nearbyint(std::ldexp(x.lo, 64));
  return h + static_cast<std::uint64_t>(static_cast<std::int64_t>(lo_scaled));
}

std::uint64_t fixed_from_ratio(std::int64_t p, std::int64_t q) {
  if (q == 0) throw InvalidParameter("zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  std::int64_t r = p % q;
  if (r < 0) r += q;
  using u128 = unsigned __int128;
  const u128 num = (static_cast<u128>(static_cast<std::uint64_t>(r)) << 64);
  const u128 uq = static_cast<u128>(q);
  u128 quo = num / uq;
  const u128 rem = num % uq;
  if (2 * rem >= uq) ++quo;
  return static_cast<std::uint64_t>(quo);
}

}  // namespace circle
}  // namespace filab
