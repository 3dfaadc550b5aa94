// SPDX-License-Identifier: Apache-2.0
// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "filab/circle.hpp"
#include "filab/kernels.hpp"

namespace filab::kernels {

namespace {

constexpr std::size_t kMaxOrder = 32;

void fixed_phases_avx2(LaneTables& t, std::uint64_t* out, std::size_t rows) {
  const std::size_t k = static_cast<std::size_t>(t.order);
  if (k + 1 > kMaxOrder) {
    scalar_table().fixed_phases(t, out, rows);
    return;
  }
  __m256i d[kMaxOrder];
  for (std::size_t j = 0; j <= k; ++j)
    d[j] = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(t.d.data() + j * kLanes));
  for (std::size_t r = 0; r < rows; ++r) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + r * kLanes), d[0]);
    for (std::size_t j = 0; j < k; ++j) d[j] = _mm256_add_epi64(d[j], d[j + 1]);
  }
  for (std::size_t j = 0; j <= k; ++j)
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(t.d.data() + j * kLanes), d[j]);
}

void fixed_to_turns_avx2(const std::uint64_t* in, double* out, std::size_t n) {
  // v = u >> 12 in [0, 2^52); double(v) via the 2^52 exponent trick, then the
  // top bit of u is folded back in as a -2^52 offset.
  const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
  const __m256d half_range = _mm256_set1_pd(2251799813685248.0);  // 2^51
  const __m256d scale = _mm256_set1_pd(0x1p-52);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i u = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
    const __m256i v = _mm256_srli_epi64(u, 12);
    __m256d d = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic_bits)), magic);
    const __m256d wrap = _mm256_and_pd(_mm256_cmp_pd(d, half_range, _CMP_GE_OQ), magic);
    d = _mm256_sub_pd(d, wrap);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, scale));
  }
  for (; i < n; ++i) out[i] = circle::fixed_to_turn(in[i]);
}

// sin and cos of 2*pi*t for t in [-1/2, 1/2], by quadrant reduction and
// Taylor polynomials on [-pi/4, pi/4].
inline void sincos_turns(__m256d t, __m256d& s_out, __m256d& c_out) {
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(t, _mm256_set1_pd(4.0)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(0.25), t);
  const __m256d x = _mm256_mul_pd(r, _mm256_set1_pd(2.0 * std::numbers::pi));
  const __m256d x2 = _mm256_mul_pd(x, x);

  __m256d ps = _mm256_set1_pd(1.0 / 1307674368000.0);  // 1/15!
  ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(-1.0 / 6227020800.0));
  ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(1.0 / 39916800.0));
  ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(-1.0 / 362880.0));
  ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(1.0 / 5040.0));
  ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(-1.0 / 120.0));
  ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(1.0 / 6.0));
  // sin x = x - x^3 * ps(x^2)
  const __m256d sn = _mm256_fnmadd_pd(_mm256_mul_pd(x2, x), ps, x);

  __m256d pc = _mm256_set1_pd(1.0 / 20922789888000.0);  // 1/16!
  pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(-1.0 / 87178291200.0));
  pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(1.0 / 479001600.0));
  pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(-1.0 / 3628800.0));
  pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(1.0 / 40320.0));
  pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(-1.0 / 720.0));
  pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(1.0 / 24.0));
  pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(-0.5));
  const __m256d cs = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(1.0));

  // Quadrant q mod 4 selects (c,s) -> (c,s), (-s,c), (-c,-s), (s,-c).
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d qm = _mm256_sub_pd(q, _mm256_mul_pd(four, _mm256_floor_pd(_mm256_mul_pd(q, _mm256_set1_pd(0.25)))));
  const __m256d one = _mm256_set1_pd(1.0), two = _mm256_set1_pd(2.0), three = _mm256_set1_pd(3.0);
  const __m256d odd = _mm256_or_pd(_mm256_cmp_pd(qm, one, _CMP_EQ_OQ), _mm256_cmp_pd(qm, three, _CMP_EQ_OQ));
  const __m256d neg_c = _mm256_or_pd(_mm256_cmp_pd(qm, one, _CMP_EQ_OQ), _mm256_cmp_pd(qm, two, _CMP_EQ_OQ));
  const __m256d neg_s = _mm256_cmp_pd(qm, two, _CMP_GE_OQ);
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d c_sel = _mm256_blendv_pd(cs, sn, odd);
  const __m256d s_sel = _mm256_blendv_pd(sn, cs, odd);
  c_out = _mm256_xor_pd(c_sel, _mm256_and_pd(neg_c, sign));
  s_out = _mm256_xor_pd(s_sel, _mm256_and_pd(neg_s, sign));
}

void exp_sum_avx2(const double* turns, std::size_t n, ExpSum& acc) {
  __m256d re0 = _mm256_setzero_pd(), im0 = _mm256_setzero_pd();
  __m256d re1 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d s, c;
    sincos_turns(_mm256_loadu_pd(turns + i), s, c);
    re0 = _mm256_add_pd(re0, c);
    im0 = _mm256_add_pd(im0, s);
    sincos_turns(_mm256_loadu_pd(turns + i + 4), s, c);
    re1 = _mm256_add_pd(re1, c);
    im1 = _mm256_add_pd(im1, s);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d s, c;
    sincos_turns(_mm256_loadu_pd(turns + i), s, c);
    re0 = _mm256_add_pd(re0, c);
    im0 = _mm256_add_pd(im0, s);
  }
  alignas(32) double r[4], m[4];
  _mm256_store_pd(r, _mm256_add_pd(re0, re1));
  _mm256_store_pd(m, _mm256_add_pd(im0, im1));
  double re = (r[0] + r[1]) + (r[2] + r[3]);
  double im = (m[0] + m[1]) + (m[2] + m[3]);
  if (i < n) {
    alignas(32) double tail[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t rem = n - i;
    for (std::size_t j = 0; j < rem; ++j) tail[j] = turns[i + j];
    __m256d s, c;
    sincos_turns(_mm256_load_pd(tail), s, c);
    _mm256_store_pd(r, c);
    _mm256_store_pd(m, s);
    for (std::size_t j = 0; j < rem; ++j) {
      re += r[j];
      im += m[j];
    }
  }
  acc.re += re;
  acc.im += im;
}

const KernelTable kAvx2{Isa::avx2, "avx2", fixed_phases_avx2, fixed_to_turns_avx2,
                        exp_sum_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace filab::kernels
