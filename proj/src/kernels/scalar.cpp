// SPDX-License-Identifier: Apache-2.0
// Reference kernels. Every SIMD variant is tested against these.
#include <cmath>
#include <numbers>

#include "filab/circle.hpp"
#include "filab/kernels.hpp"

namespace filab::kernels {

namespace {

void fixed_phases_scalar(LaneTables& t, std::uint64_t* out, std::size_t rows) {
  const std::size_t k = static_cast<std::size_t>(t.order);
  std::uint64_t* d = t.d.data();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t L = 0; L < kLanes; ++L) out[r * kLanes + L] = d[L];
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t L = 0; L < kLanes; ++L)
        d[j * kLanes + L] += d[(j + 1) * kLanes + L];
  }
}

void fixed_to_turns_scalar(const std::uint64_t* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = circle::fixed_to_turn(in[i]);
}

void exp_sum_scalar(const double* turns, std::size_t n, ExpSum& acc) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = two_pi * turns[i];
    re += std::cos(a);
    im += std::sin(a);
  }
  acc.re += re;
  acc.im += im;
}

const KernelTable kScalar{Isa::scalar, "scalar", fixed_phases_scalar,
                          fixed_to_turns_scalar, exp_sum_scalar};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace filab::kernels
