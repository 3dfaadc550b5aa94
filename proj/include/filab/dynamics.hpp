// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "filab/circle.hpp"

namespace filab {

// A point of T^k in the arithmetic of one mode. Exactly one of dd / fx is
// populated, according to `mode`.
struct TorusPoint {
  Arith mode = Arith::float64;
  std::vector<DD> dd;
  std::vector<std::uint64_t> fx;

  static TorusPoint from_doubles(const std::vector<double>& x, Arith mode);
  static TorusPoint from_dd(std::vector<DD> x);
  static TorusPoint from_fixed(std::vector<std::uint64_t> x);
  static TorusPoint zero(int k, Arith mode);

  int k() const noexcept;
  std::vector<double> to_doubles() const;  // each coordinate in [0,1)
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

// Frequency vector alpha of the skew-shift
//   Phi(s) = (s_1+a_1, s_2+s_1+a_2, ..., s_k+s_{k-1}+a_k)  (mod 1).
// In fixed64 mode alpha is rounded once to 64-bit fractions; in float64 mode
// it is kept as a compensated double-double.
//
// Error model (float64): each coordinate update is one compensated addition,
// so after n steps coordinate j carries an error of order n^j * 2^-104; the
// Weyl sum error is bounded by 2*pi*N times the phase error plus N ulp of
// summation. fixed64 sums are exact for the rounded alpha up to the
// 2^-52-turn phase quantization and the summation rounding.
class SkewShiftSystem {
 public:
  SkewShiftSystem(const std::vector<double>& alpha, Arith mode);
  explicit SkewShiftSystem(TorusPoint alpha);

  int k() const noexcept { return alpha_.k(); }
  Arith mode() const noexcept { return alpha_.mode; }
  const TorusPoint& alpha() const noexcept { return alpha_; }
  // Real inputs as given; empty when constructed from circle data.
  const std::vector<double>& alpha_original() const noexcept { return original_; }

 private:
  TorusPoint alpha_;
  std::vector<double> original_;
};

TorusPoint step(const SkewShiftSystem& sys, const TorusPoint& s);
TorusPoint step_inverse(const SkewShiftSystem& sys, const TorusPoint& s);
// N-fold composition of step.
TorusPoint iterate(const SkewShiftSystem& sys, TorusPoint s, std::uint64_t N);
// Binomial closed form of Phi^N:
//   s_j + sum_{i=1}^{j-1} C(N,i)(s_{j-i} + a_{j-i+1}) + C(N,j) a_1.
TorusPoint iterate_closed_form(const SkewShiftSystem& sys, const TorusPoint& s,
                               std::uint64_t N);

// P(n) = sum_i c_i C(n,i) mod 1 with c_k = a_1, c_i = s_{k-i} + a_{k-i+1},
// c_0 = s_k. P(n) is the last coordinate of Phi^n(s).
struct SectionPolynomial {
  int k = 0;
  Arith mode = Arith::float64;
  TorusPoint c;  // c_0..c_k, k+1 entries

  DD eval_dd(std::uint64_t n) const;          // float64 mode
  std::uint64_t eval_fixed(std::uint64_t n) const;  // fixed64 mode
  double eval(std::uint64_t n) const;          // value in [0,1)
  // Monomial coefficients m_0..m_k (ascending degree) as reals, not reduced;
  // m_k = c_k / k!.
  std::vector<double> monomial_coefficients() const;
};

SectionPolynomial section_polynomial(const SkewShiftSystem& sys, const TorusPoint& s);

// Real polynomial a_1 X^k + ... + a_k X + constant (descending degree).
struct MonomialPoly {
  std::vector<double> a;
  double constant = 0.0;
  int degree() const noexcept { return static_cast<int>(a.size()); }
};

struct SectionData {
  SkewShiftSystem sys;
  TorusPoint s;
};

// Canonical section data alpha = (c_k, 0, ..., 0), s_{k-i} = c_i, s_k = c_0
// from exact finite differences c_i = Delta^i P(0) mod 1.
SectionData monomial_to_section(const MonomialPoly& poly, Arith mode);

struct WeylSumResult {
  std::uint64_t N = 0;
  std::complex<double> value;
  std::int64_t ell = 1;
  Arith mode = Arith::float64;
};

// Per-term evaluation with every phase reduced mod 1 before the exponential.
WeylSumResult weyl_sum_direct(const MonomialPoly& poly, std::int64_t ell,
                              std::uint64_t N, Arith mode);

// Sum of e(ell * s_k) along the skew-shift orbit.
WeylSumResult weyl_sum_skew(const SkewShiftSystem& sys, const TorusPoint& s,
                            std::int64_t ell, std::uint64_t N);

// Step-by-step reference: iterates Phi one step at a time and uses the
// scalar exponential. Slow; used to validate the kernel path.
WeylSumResult weyl_sum_skew_reference(const SkewShiftSystem& sys, const TorusPoint& s,
                                      std::int64_t ell, std::uint64_t N);

struct WeylPartial {
  std::uint64_t N = 0;
  std::complex<double> value;
};

// Partial sums W(N) for every N of an increasing schedule in one pass.
// Chunks of the orbit restart from the closed form at fixed boundaries, so
// the result does not depend on `threads`.
std::vector<WeylPartial> weyl_sum_schedule(const SkewShiftSystem& sys,
                                           const TorusPoint& s, std::int64_t ell,
                                           const std::vector<std::uint64_t>& schedule,
                                           unsigned threads = 1);

struct FourierTerm {
  std::vector<std::int64_t> m;
  std::complex<double> coeff;
};

std::complex<double> ergodic_sum(const SkewShiftSystem& sys, const TorusPoint& s,
                                 const std::vector<FourierTerm>& f, std::uint64_t N);

}  // namespace filab
