// SPDX-License-Identifier: Apache-2.0
// Monte Carlo estimate of iint_{|y|>=|x|} (1+y^2)^{-3/2} dx dy (exact value 4).
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace oracle {

// x ~ Cauchy; |y| = (1+|x|)/(1-v) - 1 with v uniform and a random sign, so
// y has density (1+|x|) / (2 (1+|y|)^2) on |y| >= |x|.
inline double green_double_integral_mc(std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::cauchy_distribution<double> cauchy(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double x = cauchy(gen);
    const double ax = std::abs(x);
    const double ay = (1.0 + ax) / (1.0 - unif(gen)) - 1.0;
    const double w = std::numbers::pi * (1.0 + x * x) * 2.0 * (1.0 + ay) * (1.0 + ay) /
                     ((1.0 + ax) * std::pow(1.0 + ay * ay, 1.5));
    sum += w;
  }
  return sum / static_cast<double>(samples);
}

}  // namespace oracle
