// SPDX-License-Identifier: Apache-2.0
#include "filab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "filab/error.hpp"
#include "filab/kernels.hpp"

namespace filab {

namespace {

constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
constexpr std::size_t kBlockRows = 1024;

void check_same_mode(const SkewShiftSystem& sys, const TorusPoint& s) {
  require(s.mode == sys.mode(), "point and system use different arithmetic modes");
  require(s.k() == sys.k(), "point dimension does not match the system");
}

std::complex<double> unit(double turn) {
  const double a = 2.0 * std::numbers::pi * turn;
  return {std::cos(a), std::sin(a)};
}

// Phi on raw coordinates; the highest index is updated first so that every
// update reads the previous value of its lower neighbour.
void step_fixed(const std::vector<std::uint64_t>& a, std::vector<std::uint64_t>& s) {
  for (std::size_t j = s.size() - 1; j > 0; --j) s[j] += s[j - 1] + a[j];
  s[0] += a[0];
}

void step_dd(const std::vector<DD>& a, std::vector<DD>& s) {
  for (std::size_t j = s.size() - 1; j > 0; --j)
    s[j] = circle::add(circle::add(s[j], s[j - 1]), a[j]);
  s[0] = circle::add(s[0], a[0]);
}

std::uint64_t ipow_wrap(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

BigInt ipow_big(std::uint64_t base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Lane tables for ell * P(n0 + L + kLanes*m), L = 0..kLanes-1.
kernels::LaneTables make_lanes(const SectionPolynomial& P, std::uint64_t ell_raw,
                               std::uint64_t n0) {
  const int k = P.k;
  kernels::LaneTables t;
  t.order = k;
  t.d.assign(static_cast<std::size_t>(k + 1) * kernels::kLanes, 0);
  std::vector<std::uint64_t> vals(static_cast<std::size_t>(k + 1));
  for (std::size_t L = 0; L < kernels::kLanes; ++L) {
    for (int i = 0; i <= k; ++i)
      vals[static_cast<std::size_t>(i)] =
          ell_raw * P.eval_fixed(n0 + L + kernels::kLanes * static_cast<std::uint64_t>(i));
    // In-place forward differences: vals[j] becomes Delta^j at m = 0.
    for (int j = 1; j <= k; ++j)
      for (int i = k; i >= j; --i)
        vals[static_cast<std::size_t>(i)] -= vals[static_cast<std::size_t>(i - 1)];
    for (int j = 0; j <= k; ++j)
      t.d[static_cast<std::size_t>(j) * kernels::kLanes + L] = vals[static_cast<std::size_t>(j)];
  }
  return t;
}

kernels::ExpSum chunk_sum_fixed(const SectionPolynomial& P, std::int64_t ell,
                                std::uint64_t n0, std::uint64_t n1) {
  const kernels::KernelTable& kt = kernels::active();
  kernels::LaneTables lanes = make_lanes(P, static_cast<std::uint64_t>(ell), n0);
  std::vector<std::uint64_t> phases(kBlockRows * kernels::kLanes);
  std::vector<double> turns(kBlockRows * kernels::kLanes);
  kernels::ExpSum acc;
  std::uint64_t remaining = n1 - n0;
  while (remaining > 0) {
    const std::size_t rows = static_cast<std::size_t>(
        std::min<std::uint64_t>(kBlockRows, (remaining + kernels::kLanes - 1) / kernels::kLanes));
    kt.fixed_phases(lanes, phases.data(), rows);
    const std::size_t cnt = static_cast<std::size_t>(
        std::min<std::uint64_t>(remaining, rows * kernels::kLanes));
    kt.fixed_to_turns(phases.data(), turns.data(), cnt);
    kt.exp_sum(turns.data(), cnt, acc);
    remaining -= cnt;
  }
  return acc;
}

kernels::ExpSum chunk_sum_dd(const SkewShiftSystem& sys, const TorusPoint& s0,
                             std::int64_t ell, std::uint64_t n0, std::uint64_t n1) {
  const kernels::KernelTable& kt = kernels::active();
  std::vector<DD> s = iterate_closed_form(sys, s0, n0).dd;
  const std::vector<DD>& a = sys.alpha().dd;
  std::vector<double> turns(kBlockRows * kernels::kLanes);
  kernels::ExpSum acc;
  std::uint64_t n = n0;
  while (n < n1) {
    const std::size_t cnt =
        static_cast<std::size_t>(std::min<std::uint64_t>(turns.size(), n1 - n));
    for (std::size_t i = 0; i < cnt; ++i) {
      turns[i] = circle::to_turn(circle::mul_small(s.back(), ell));
      step_dd(a, s);
    }
    kt.exp_sum(turns.data(), cnt, acc);
    n += cnt;
  }
  return acc;
}

}  // namespace

TorusPoint TorusPoint::from_doubles(const std::vector<double>& x, Arith mode) {
  TorusPoint p;
  p.mode = mode;
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidParameter("non-finite torus coordinate");
    if (mode == Arith::float64)
      p.dd.push_back(circle::from_double(v));
    else
      p.fx.push_back(circle::to_fixed(v));
  }
  return p;
}

TorusPoint TorusPoint::from_dd(std::vector<DD> x) {
  TorusPoint p;
  p.mode = Arith::float64;
  p.dd = std::move(x);
  return p;
}

TorusPoint TorusPoint::from_fixed(std::vector<std::uint64_t> x) {
  TorusPoint p;
  p.mode = Arith::fixed64;
  p.fx = std::move(x);
  return p;
}

TorusPoint TorusPoint::zero(int k, Arith mode) {
  return from_doubles(std::vector<double>(static_cast<std::size_t>(k), 0.0), mode);
}

int TorusPoint::k() const noexcept {
  return static_cast<int>(mode == Arith::float64 ? dd.size() : fx.size());
}

std::vector<double> TorusPoint::to_doubles() const {
  std::vector<double> out;
  if (mode == Arith::float64)
    for (const DD& v : dd) out.push_back(circle::to_double(v));
  else
    for (std::uint64_t v : fx) out.push_back(circle::fixed_to_double(v));
  return out;
}

SkewShiftSystem::SkewShiftSystem(const std::vector<double>& alpha, Arith mode)
    : alpha_(TorusPoint::from_doubles(alpha, mode)), original_(alpha) {
  require(!alpha.empty(), "skew-shift needs k >= 1");
}

SkewShiftSystem::SkewShiftSystem(TorusPoint alpha) : alpha_(std::move(alpha)) {
  require(alpha_.k() >= 1, "skew-shift needs k >= 1");
}

TorusPoint step(const SkewShiftSystem& sys, const TorusPoint& s) {
  check_same_mode(sys, s);
  TorusPoint out = s;
  if (s.mode == Arith::fixed64)
    step_fixed(sys.alpha().fx, out.fx);
  else
    step_dd(sys.alpha().dd, out.dd);
  return out;
}

TorusPoint step_inverse(const SkewShiftSystem& sys, const TorusPoint& s) {
  check_same_mode(sys, s);
  TorusPoint out = s;
  const std::size_t k = static_cast<std::size_t>(s.k());
  if (s.mode == Arith::fixed64) {
    const auto& a = sys.alpha().fx;
    out.fx[0] = s.fx[0] - a[0];
    for (std::size_t j = 1; j < k; ++j) out.fx[j] = s.fx[j] - out.fx[j - 1] - a[j];
  } else {
    const auto& a = sys.alpha().dd;
    out.dd[0] = circle::sub(s.dd[0], a[0]);
    for (std::size_t j = 1; j < k; ++j)
      out.dd[j] = circle::sub(circle::sub(s.dd[j], out.dd[j - 1]), a[j]);
  }
  return out;
}

TorusPoint iterate(const SkewShiftSystem& sys, TorusPoint s, std::uint64_t N) {
  check_same_mode(sys, s);
  for (std::uint64_t n = 0; n < N; ++n) {
    if (s.mode == Arith::fixed64)
      step_fixed(sys.alpha().fx, s.fx);
    else
      step_dd(sys.alpha().dd, s.dd);
  }
  return s;
}

TorusPoint iterate_closed_form(const SkewShiftSystem& sys, const TorusPoint& s,
                               std::uint64_t N) {
  check_same_mode(sys, s);
  const int k = s.k();
  std::vector<BigInt> binom(static_cast<std::size_t>(k + 1));
  for (int i = 0; i <= k; ++i) binom[static_cast<std::size_t>(i)] = circle::binomial(N, static_cast<unsigned>(i));
  TorusPoint out = s;
  // 1-based j in the formula maps to index j-1 here.
  for (int j = 1; j <= k; ++j) {
    const auto J = static_cast<std::size_t>(j - 1);
    if (s.mode == Arith::fixed64) {
      const auto& a = sys.alpha().fx;
      std::uint64_t v = s.fx[J];
      for (int i = 1; i <= j - 1; ++i) {
        const auto c = circle::low64(binom[static_cast<std::size_t>(i)]);
        v += c * (s.fx[static_cast<std::size_t>(j - i - 1)] + a[static_cast<std::size_t>(j - i)]);
      }
      v += circle::low64(binom[static_cast<std::size_t>(j)]) * a[0];
      out.fx[J] = v;
    } else {
      const auto& a = sys.alpha().dd;
      DD v = s.dd[J];
      for (int i = 1; i <= j - 1; ++i) {
        const DD base = circle::add(s.dd[static_cast<std::size_t>(j - i - 1)],
                                    a[static_cast<std::size_t>(j - i)]);
        v = circle::add(v, circle::frac_mul(binom[static_cast<std::size_t>(i)], base));
      }
      v = circle::add(v, circle::frac_mul(binom[static_cast<std::size_t>(j)], a[0]));
      out.dd[J] = v;
    }
  }
  return out;
}

SectionPolynomial section_polynomial(const SkewShiftSystem& sys, const TorusPoint& s) {
  check_same_mode(sys, s);
  const auto k = static_cast<std::size_t>(s.k());
  SectionPolynomial P;
  P.k = s.k();
  P.mode = s.mode;
  P.c.mode = s.mode;
  if (s.mode == Arith::fixed64) {
    const auto& a = sys.alpha().fx;
    P.c.fx.resize(k + 1);
    P.c.fx[0] = s.fx[k - 1];
    for (std::size_t i = 1; i < k; ++i) P.c.fx[i] = s.fx[k - i - 1] + a[k - i];
    P.c.fx[k] = a[0];
  } else {
    const auto& a = sys.alpha().dd;
    P.c.dd.resize(k + 1);
    P.c.dd[0] = s.dd[k - 1];
    for (std::size_t i = 1; i < k; ++i) P.c.dd[i] = circle::add(s.dd[k - i - 1], a[k - i]);
    P.c.dd[k] = a[0];
  }
  return P;
}

DD SectionPolynomial::eval_dd(std::uint64_t n) const {
  require(mode == Arith::float64, "eval_dd needs float64 mode");
  DD v{};
  for (int i = 0; i <= k; ++i)
    v = circle::add(v, circle::frac_mul(circle::binomial(n, static_cast<unsigned>(i)),
                                        c.dd[static_cast<std::size_t>(i)]));
  return v;
}

std::uint64_t SectionPolynomial::eval_fixed(std::uint64_t n) const {
  require(mode == Arith::fixed64, "eval_fixed needs fixed64 mode");
  std::uint64_t v = 0;
  for (int i = 0; i <= k; ++i)
    v += circle::low64(circle::binomial(n, static_cast<unsigned>(i))) *
         c.fx[static_cast<std::size_t>(i)];
  return v;
}

double SectionPolynomial::eval(std::uint64_t n) const {
  return mode == Arith::fixed64 ? circle::fixed_to_double(eval_fixed(n))
                                : circle::to_double(eval_dd(n));
}

std::vector<double> SectionPolynomial::monomial_coefficients() const {
  const std::vector<double> cv = c.to_doubles();
  std::vector<double> out(static_cast<std::size_t>(k + 1), 0.0);
  // C(X,i) = X(X-1)...(X-i+1)/i!, expanded incrementally.
  std::vector<double> basis{1.0};
  for (int i = 0; i <= k; ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) out[j] += cv[static_cast<std::size_t>(i)] * basis[j];
    std::vector<double> next(basis.size() + 1, 0.0);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      next[j + 1] += basis[j] / (i + 1);
      next[j] -= basis[j] * i / (i + 1);
    }
    basis.swap(next);
  }
  return out;
}

SectionData monomial_to_section(const MonomialPoly& poly, Arith mode) {
  const int k = poly.degree();
  require(k >= 1, "polynomial degree must be >= 1");
  const auto K = static_cast<std::size_t>(k);
  // P(j) for j = 0..k, then c_i = Delta^i P(0) by in-place differences.
  if (mode == Arith::fixed64) {
    std::vector<std::uint64_t> A(K);
    for (std::size_t d = 0; d < K; ++d) A[d] = circle::to_fixed(poly.a[d]);
    const std::uint64_t c0 = circle::to_fixed(poly.constant);
    std::vector<std::uint64_t> v(K + 1);
    for (std::size_t j = 0; j <= K; ++j) {
      std::uint64_t p = c0;
      for (std::size_t d = 0; d < K; ++d) p += A[d] * ipow_wrap(j, k - static_cast<int>(d));
      v[j] = p;
    }
    for (std::size_t r = 1; r <= K; ++r)
      for (std::size_t i = K; i >= r; --i) v[i] -= v[i - 1];
    std::vector<std::uint64_t> alpha(K, 0), s(K, 0);
    alpha[0] = v[K];
    for (std::size_t i = 1; i < K; ++i) s[K - i - 1] = v[i];
    s[K - 1] = v[0];
    return {SkewShiftSystem(TorusPoint::from_fixed(alpha)), TorusPoint::from_fixed(s)};
  }
  std::vector<DD> v(K + 1);
  for (std::size_t j = 0; j <= K; ++j) {
    DD p = circle::from_double(poly.constant);
    for (std::size_t d = 0; d < K; ++d)
      p = circle::add(p, circle::frac_mul(ipow_big(j, k - static_cast<int>(d)), poly.a[d]));
    v[j] = p;
  }
  for (std::size_t r = 1; r <= K; ++r)
    for (std::size_t i = K; i >= r; --i) v[i] = circle::sub(v[i], v[i - 1]);
  std::vector<DD> alpha(K), s(K);
  alpha[0] = v[K];
  for (std::size_t i = 1; i < K; ++i) s[K - i - 1] = v[i];
  s[K - 1] = v[0];
  return {SkewShiftSystem(TorusPoint::from_dd(alpha)), TorusPoint::from_dd(s)};
}

WeylSumResult weyl_sum_direct(const MonomialPoly& poly, std::int64_t ell,
                              std::uint64_t N, Arith mode) {
  require(ell != 0, "ell must be nonzero");
  const int k = poly.degree();
  const auto K = static_cast<std::size_t>(k);
  std::complex<double> acc{0.0, 0.0};
  if (mode == Arith::fixed64) {
    std::vector<std::uint64_t> A(K);
    for (std::size_t d = 0; d < K; ++d) A[d] = circle::to_fixed(poly.a[d]);
    const std::uint64_t c0 = circle::to_fixed(poly.constant);
    const auto l = static_cast<std::uint64_t>(ell);
    for (std::uint64_t n = 0; n < N; ++n) {
      std::uint64_t p = c0;
      for (std::size_t d = 0; d < K; ++d) p += A[d] * ipow_wrap(n, k - static_cast<int>(d));
      acc += unit(circle::fixed_to_turn(l * p));
    }
  } else {
    const DD c0 = circle::frac_mul(BigInt(ell), poly.constant);
    for (std::uint64_t n = 0; n < N; ++n) {
      DD p = c0;
      for (std::size_t d = 0; d < K; ++d)
        p = circle::add(p, circle::frac_mul(ipow_big(n, k - static_cast<int>(d)) * ell, poly.a[d]));
      acc += unit(circle::to_turn(p));
    }
  }
  return {N, acc, ell, mode};
}

std::vector<WeylPartial> weyl_sum_schedule(const SkewShiftSystem& sys,
                                           const TorusPoint& s, std::int64_t ell,
                                           const std::vector<std::uint64_t>& schedule,
                                           unsigned threads) {
  check_same_mode(sys, s);
  require(ell != 0, "ell must be nonzero");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    require(schedule[i] > schedule[i - 1], "N schedule must be strictly increasing");
  if (schedule.empty()) return {};

  std::vector<std::uint64_t> bounds{0};
  const std::uint64_t nmax = schedule.back();
  std::size_t si = 0;
  for (std::uint64_t g = kChunk;; g += kChunk) {
    const std::uint64_t next_grid = std::min(g, nmax);
    while (si < schedule.size() && schedule[si] < next_grid) {
      if (schedule[si] > bounds.back()) bounds.push_back(schedule[si]);
      ++si;
    }
    if (next_grid > bounds.back()) bounds.push_back(next_grid);
    if (next_grid == nmax) break;
  }

  const std::size_t chunks = bounds.size() - 1;
  std::vector<kernels::ExpSum> sums(chunks);
  const SectionPolynomial P =
      sys.mode() == Arith::fixed64 ? section_polynomial(sys, s) : SectionPolynomial{};
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t c = first; c < chunks; c += stride)
      sums[c] = sys.mode() == Arith::fixed64
                    ? chunk_sum_fixed(P, ell, bounds[c], bounds[c + 1])
                    : chunk_sum_dd(sys, s, ell, bounds[c], bounds[c + 1]);
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (nt == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t, nt);
    for (auto& th : pool) th.join();
  }

  std::vector<WeylPartial> out;
  std::complex<double> run{0.0, 0.0};
  std::size_t b = 0;
  for (std::uint64_t N : schedule) {
    while (b < chunks && bounds[b + 1] <= N) {
      run += std::complex<double>(sums[b].re, sums[b].im);
      ++b;
    }
    out.push_back({N, run});
  }
  return out;
}

WeylSumResult weyl_sum_skew(const SkewShiftSystem& sys, const TorusPoint& s,
                            std::int64_t ell, std::uint64_t N) {
  require(ell != 0, "ell must be nonzero");
  const auto parts = weyl_sum_schedule(sys, s, ell, {N}, 1);
  return {N, parts.front().value, ell, sys.mode()};
}

WeylSumResult weyl_sum_skew_reference(const SkewShiftSystem& sys, const TorusPoint& s,
                                      std::int64_t ell, std::uint64_t N) {
  check_same_mode(sys, s);
  require(ell != 0, "ell must be nonzero");
  TorusPoint x = s;
  std::complex<double> acc{0.0, 0.0};
  for (std::uint64_t n = 0; n < N; ++n) {
    if (x.mode == Arith::fixed64) {
      acc += unit(circle::fixed_to_turn(static_cast<std::uint64_t>(ell) * x.fx.back()));
      step_fixed(sys.alpha().fx, x.fx);
    } else {
      acc += unit(circle::to_turn(circle::mul_small(x.dd.back(), ell)));
      step_dd(sys.alpha().dd, x.dd);
    }
  }
  return {N, acc, ell, sys.mode()};
}

std::complex<double> ergodic_sum(const SkewShiftSystem& sys, const TorusPoint& s,
                                 const std::vector<FourierTerm>& f, std::uint64_t N) {
  check_same_mode(sys, s);
  const auto k = static_cast<std::size_t>(s.k());
  for (const auto& term : f)
    require(term.m.size() == k, "Fourier mode dimension does not match the system");
  TorusPoint x = s;
  std::complex<double> acc{0.0, 0.0};
  for (std::uint64_t n = 0; n < N; ++n) {
    for (const auto& term : f) {
      double turn;
      if (x.mode == Arith::fixed64) {
        std::uint64_t p = 0;
        for (std::size_t i = 0; i < k; ++i) p += static_cast<std::uint64_t>(term.m[i]) * x.fx[i];
        turn = circle::fixed_to_turn(p);
      } else {
        DD p{};
        for (std::size_t i = 0; i < k; ++i) p = circle::add(p, circle::mul_small(x.dd[i], term.m[i]));
        turn = circle::to_turn(p);
      }
      acc += term.coeff * unit(turn);
    }
    if (x.mode == Arith::fixed64)
      step_fixed(sys.alpha().fx, x.fx);
    else
      step_dd(sys.alpha().dd, x.dd);
  }
  return acc;
}

}  // namespace filab
