// SPDX-License-Identifier: Apache-2.0
#include "filab/scaling.hpp"

#include <cmath>
#include <numeric>

#include "filab/error.hpp"

namespace filab {

ScalingExponents::ScalingExponents(std::vector<double> rho) : rho_(std::move(rho)) {
  require(!rho_.empty(), "scaling exponents must be non-empty");
  for (double r : rho_) require(std::isfinite(r) && r >= 0.0, "scaling exponents must be >= 0");
  const double sum = std::accumulate(rho_.begin(), rho_.end(), 0.0);
  require(std::abs(sum - 1.0) <= 1e-12, "scaling exponents must sum to 1");
}

bool ScalingExponents::admissible(double tol) const {
  const int kk = k();
  const double r1 = (*this)(1);
  if (r1 <= 0.0) return false;
  if (kk < 2) return true;
  for (int i = 0; i <= kk - 1; ++i) {
    const double r = (*this)(kk - i);
    const double low = static_cast<double>(i) / (kk - 1) * r1;
    const bool first = low - tol <= r && r <= r1 + tol;
    const bool second = r1 - tol <= r;
    if (!first && !second) return false;
  }
  return true;
}

}  // namespace filab
