// SPDX-License-Identifier: Apache-2.0
// AArch64 NEON variants, two 64-bit lanes per register.
#include <arm_neon.h>

#include <cmath>
#include <numbers>

#include "filab/circle.hpp"
#include "filab/kernels.hpp"

namespace filab::kernels {

namespace {

constexpr std::size_t kMaxOrder = 32;

void fixed_phases_neon(LaneTables& t, std::uint64_t* out, std::size_t rows) {
  const std::size_t k = static_cast<std::size_t>(t.order);
  if (k + 1 > kMaxOrder) {
    scalar_table().fixed_phases(t, out, rows);
    return;
  }
  uint64x2_t lo[kMaxOrder], hi[kMaxOrder];
  for (std::size_t j = 0; j <= k; ++j) {
    lo[j] = vld1q_u64(t.d.data() + j * kLanes);
    hi[j] = vld1q_u64(t.d.data() + j * kLanes + 2);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    vst1q_u64(out + r * kLanes, lo[0]);
    vst1q_u64(out + r * kLanes + 2, hi[0]);
    for (std::size_t j = 0; j < k; ++j) {
      lo[j] = vaddq_u64(lo[j], lo[j + 1]);
      hi[j] = vaddq_u64(hi[j], hi[j + 1]);
    }
  }
  for (std::size_t j = 0; j <= k; ++j) {
    vst1q_u64(t.d.data() + j * kLanes, lo[j]);
    vst1q_u64(t.d.data() + j * kLanes + 2, hi[j]);
  }
}

void fixed_to_turns_neon(const std::uint64_t* in, double* out, std::size_t n) {
  const float64x2_t scale = vdupq_n_f64(0x1p-52);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const int64x2_t v = vshrq_n_s64(vreinterpretq_s64_u64(vld1q_u64(in + i)), 12);
    vst1q_f64(out + i, vmulq_f64(vcvtq_f64_s64(v), scale));
  }
  for (; i < n; ++i) out[i] = circle::fixed_to_turn(in[i]);
}

inline void sincos_turns(float64x2_t t, float64x2_t& s_out, float64x2_t& c_out) {
  const float64x2_t q = vrndnq_f64(vmulq_n_f64(t, 4.0));
  const float64x2_t r = vfmsq_f64(t, q, vdupq_n_f64(0.25));
  const float64x2_t x = vmulq_n_f64(r, 2.0 * std::numbers::pi);
  const float64x2_t x2 = vmulq_f64(x, x);

  float64x2_t ps = vdupq_n_f64(1.0 / 1307674368000.0);
  ps = vfmaq_f64(vdupq_n_f64(-1.0 / 6227020800.0), ps, x2);
  ps = vfmaq_f64(vdupq_n_f64(1.0 / 39916800.0), ps, x2);
  ps = vfmaq_f64(vdupq_n_f64(-1.0 / 362880.0), ps, x2);
  ps = vfmaq_f64(vdupq_n_f64(1.0 / 5040.0), ps, x2);
  ps = vfmaq_f64(vdupq_n_f64(-1.0 / 120.0), ps, x2);
  ps = vfmaq_f64(vdupq_n_f64(1.0 / 6.0), ps, x2);
  const float64x2_t sn = vfmsq_f64(x, vmulq_f64(x2, x), ps);

  float64x2_t pc = vdupq_n_f64(1.0 / 20922789888000.0);
  pc = vfmaq_f64(vdupq_n_f64(-1.0 / 87178291200.0), pc, x2);
  pc = vfmaq_f64(vdupq_n_f64(1.0 / 479001600.0), pc, x2);
  pc = vfmaq_f64(vdupq_n_f64(-1.0 / 3628800.0), pc, x2);
  pc = vfmaq_f64(vdupq_n_f64(1.0 / 40320.0), pc, x2);
  pc = vfmaq_f64(vdupq_n_f64(-1.0 / 720.0), pc, x2);
  pc = vfmaq_f64(vdupq_n_f64(1.0 / 24.0), pc, x2);
  pc = vfmaq_f64(vdupq_n_f64(-0.5), pc, x2);
  const float64x2_t cs = vfmaq_f64(vdupq_n_f64(1.0), pc, x2);

  const int64x2_t qi = vandq_s64(vcvtq_s64_f64(q), vdupq_n_s64(3));
  const uint64x2_t odd = vceqq_s64(vandq_s64(qi, vdupq_n_s64(1)), vdupq_n_s64(1));
  const uint64x2_t neg_c = vceqq_s64(vandq_s64(vaddq_s64(qi, vdupq_n_s64(1)), vdupq_n_s64(2)),
                                     vdupq_n_s64(2));
  const uint64x2_t neg_s = vceqq_s64(vandq_s64(qi, vdupq_n_s64(2)), vdupq_n_s64(2));
  const uint64x2_t sign = vdupq_n_u64(0x8000000000000000ULL);
  const float64x2_t c_sel = vbslq_f64(odd, sn, cs);
  const float64x2_t s_sel = vbslq_f64(odd, cs, sn);
  c_out = vreinterpretq_f64_u64(veorq_u64(vreinterpretq_u64_f64(c_sel), vandq_u64(neg_c, sign)));
  s_out = vreinterpretq_f64_u64(veorq_u64(vreinterpretq_u64_f64(s_sel), vandq_u64(neg_s, sign)));
}

void exp_sum_neon(const double* turns, std::size_t n, ExpSum& acc) {
  float64x2_t re = vdupq_n_f64(0.0), im = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t s, c;
    sincos_turns(vld1q_f64(turns + i), s, c);
    re = vaddq_f64(re, c);
    im = vaddq_f64(im, s);
  }
  double r = vgetq_lane_f64(re, 0) + vgetq_lane_f64(re, 1);
  double m = vgetq_lane_f64(im, 0) + vgetq_lane_f64(im, 1);
  if (i < n) {
    float64x2_t s, c;
    sincos_turns(vdupq_n_f64(turns[i]), s, c);
    r += vgetq_lane_f64(c, 0);
    m += vgetq_lane_f64(s, 0);
  }
  acc.re += r;
  acc.im += m;
}

const KernelTable kNeon{Isa::neon, "neon", fixed_phases_neon, fixed_to_turns_neon,
                        exp_sum_neon};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

}  // namespace filab::kernels
