// SPDX-License-Identifier: Apache-2.0
#include "filab/diophantine.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "filab/circle.hpp"
#include "filab/error.hpp"

namespace filab {

namespace {

using boost::multiprecision::numerator;
using boost::multiprecision::denominator;

BigInt floor_rat(const BigRational& r) {
  const BigInt n = numerator(r), d = denominator(r);  // d > 0
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

BigRational rat_from_double(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mi = static_cast<std::int64_t>(std::ldexp(m, 53));
  const int shift = e - 53;
  BigRational r(mi);
  if (shift > 0) r *= BigRational(BigInt(1) << shift);
  if (shift < 0) r /= BigRational(BigInt(1) << -shift);
  return r;
}

double log_big(const BigInt& n) {
  // Split off a power of two so that huge values stay finite.
  const unsigned bits = boost::multiprecision::msb(n);
  if (bits < 1000) return std::log(n.convert_to<double>());
  const unsigned drop = bits - 60;
  return std::log((n >> drop).convert_to<double>()) + drop * std::log(2.0);
}

const BigInt kQuotientCap = BigInt(1) << 60;
const BigRational kUnresolvable = BigRational(BigInt(1) << 20);

}  // namespace

ExactReal ExactReal::from_double(double x) {
  require(std::isfinite(x), "non-finite real");
  const double up = std::nextafter(std::abs(x), std::numeric_limits<double>::infinity());
  return {rat_from_double(x), rat_from_double(up - std::abs(x)) / 2};
}

ExactReal ExactReal::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  require(!s.empty(), "empty number");
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      const BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
      require(q != 0, "zero denominator");
      return exact(BigRational(p, q));
    }
    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
    BigInt mant = 0;
    int frac_digits = 0, digits = 0;
    bool dot = false;
    for (; i < s.size(); ++i) {
      const char c = s[i];
      if (c == '.') {
        require(!dot, "malformed number: " + text);
        dot = true;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        mant = mant * 10 + (c - '0');
        ++digits;
        if (dot) ++frac_digits;
      } else {
        break;
      }
    }
    require(digits > 0, "malformed number: " + text);
    long exp10 = 0;
    if (i < s.size()) {
      require(s[i] == 'e' || s[i] == 'E', "malformed number: " + text);
      exp10 = std::stol(s.substr(i + 1));
    }
    const long scale = exp10 - frac_digits;
    BigRational unit = 1;
    const BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::abs(scale)));
    unit = scale >= 0 ? BigRational(ten_pow) : BigRational(BigInt(1), ten_pow);
    BigRational v = BigRational(mant) * unit;
    if (neg) v = -v;
    return {v, unit / 2};
  } catch (const std::runtime_error&) {
    throw InvalidParameter("malformed number: " + text);
  }
}

double ExactReal::approx() const { return value.convert_to<double>(); }

ContinuedFraction continued_fraction(const ExactReal& x, int depth) {
  require(depth >= 1, "depth must be >= 1");
  ContinuedFraction cf;
  cf.x = x;
  BigRational v = x.value;
  BigRational lo = x.value - x.radius, hi = x.value + x.radius;
  const bool exact = x.radius == 0;
  // (p_prev, q_prev) = (p_{-1}, q_{-1}) = (1, 0); (p, q) = (p_{-2}, q_{-2}) = (0, 1).
  BigInt p_prev = 1, q_prev = 0, p = 0, q = 1;
  for (int i = 0; i < depth; ++i) {
    const BigInt a = floor_rat(v);
    if (!exact && (floor_rat(lo) != a || floor_rat(hi) != a)) {
      if (denominator(v) == 1) {
        // The centre itself ends here; take its final quotient.
      } else {
        cf.precision_limited = true;
        if (hi - lo > 0 && BigRational(floor_rat(hi)) >= kUnresolvable) cf.rational = true;
        break;
      }
    }
    if (i > 0 && !exact && a > kQuotientCap) {
      cf.rational = true;
      break;
    }
    const BigInt pn = a * p_prev + p, qn = a * q_prev + q;
    p = p_prev;
    q = q_prev;
    p_prev = pn;
    q_prev = qn;
    cf.quotients.push_back(a);
    cf.convergents.emplace_back(pn, qn);
    const BigRational f = v - a;
    if (f == 0) {
      cf.rational = true;
      break;
    }
    if (!exact) {
      const BigRational flo = lo - a, fhi = hi - a;
      if (flo <= 0) {
        // The remainder interval reaches 0: the next quotient is unbounded.
        cf.precision_limited = true;
        cf.rational = true;
        break;
      }
      lo = 1 / fhi;
      hi = 1 / flo;
    }
    v = 1 / f;
  }
  return cf;
}

ContinuedFraction continued_fraction(double x, int depth) {
  return continued_fraction(ExactReal::from_double(x), depth);
}

NuEstimate diophantine_exponent_estimate(const ExactReal& x, const BigInt& qmax,
                                         const BigInt& q_min) {
  require(qmax >= 10, "Qmax must be >= 10");
  require(q_min >= 2, "q_min must be >= 2");
  // Enough depth to pass Qmax: denominators grow at least like Fibonacci.
  const int depth = static_cast<int>(1.5 * log_big(qmax) / std::log(1.618) + 8);
  const ContinuedFraction cf = continued_fraction(x, depth);
  NuEstimate est;
  est.precision_limited = cf.precision_limited;
  if (cf.rational && !cf.convergents.empty() && cf.convergents.back().second <= qmax) {
    est.infinite = true;
    est.nu = std::numeric_limits<double>::infinity();
    est.argmax_q = cf.convergents.back().second;
    return est;
  }
  bool any = false;
  for (std::size_t n = 0; n < cf.convergents.size(); ++n) {
    const BigInt& q = cf.convergents[n].second;
    if (q > qmax) break;
    if (q < q_min) continue;
    if (n + 1 >= cf.quotients.size()) {
      // The next quotient is not determined by the input.
      est.precision_limited = true;
      break;
    }
    const double nu = 1.0 + log_big(cf.quotients[n + 1]) / log_big(q);
    ++est.convergents_used;
    if (!any || nu > est.nu) {
      est.nu = nu;
      est.argmax_q = q;
      any = true;
    }
  }
  if (!any) throw InvalidParameter("no convergent denominator in [q_min, Qmax]");
  return est;
}

NuEstimate diophantine_exponent_estimate(double x, const BigInt& qmax,
                                         const BigInt& q_min) {
  return diophantine_exponent_estimate(ExactReal::from_double(x), qmax, q_min);
}

std::uint64_t count_small_denominators(const ExactReal& x, std::uint64_t N, double delta) {
  BigRational frac = x.value - BigRational(floor_rat(x.value));
  const BigRational scaled = frac * BigRational(BigInt(1) << 64) + BigRational(1, 2);
  const BigInt raw = floor_rat(scaled);
  const std::uint64_t fx = circle::low64(raw);
  require(N >= 1, "N must be >= 1");
  require(delta > 0.0 && delta <= 0.5, "delta must lie in (0, 1/2]");
  if (N > kMaxDirectScan) throw ResourceExceeded("direct scan limited to N <= 10^7");
  const long double thr = std::ldexp(static_cast<long double>(delta), 64);
  std::uint64_t count = 0;
  std::uint64_t acc = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    acc += fx;
    const std::uint64_t d = std::min(acc, std::uint64_t{0} - acc);
    if (static_cast<long double>(d) <= thr) ++count;
  }
  return 2 * count;
}

std::uint64_t count_small_denominators(double x, std::uint64_t N, double delta) {
  return count_small_denominators(ExactReal::exact(rat_from_double(x)), N, delta);
}

double nu_rho_dictionary(int k, double rho1) {
  require(k >= 2, "k must be >= 2");
  require(rho1 > 0.0, "rho_1 must be positive");
  return 1.0 / rho1;
}

JarnikExponents jarnik_exponents(const ScalingExponents& rho, double nu) {
  const int k = rho.k();
  const double r1 = rho(1);
  require(k >= 2, "k must be >= 2");
  require(r1 > 0.0, "rho_1 must be positive");
  require(nu >= 1.0, "nu must be >= 1");
  const double den = k * r1 + k - 1;
  JarnikExponents out;
  out.b = ((k - 1) * nu - k * r1 + 1) / den;
  out.common = (1 - nu * r1) / den;
  out.all_positive = out.b > 0;
  for (int i = 2; i <= k; ++i) {
    const double bi = (nu * r1 + ((k - 1) * nu + k) * rho(i) - 1) / den;
    out.b_i.push_back(bi);
    out.all_positive = out.all_positive && bi > 0;
  }
  return out;
}

}  // namespace filab
