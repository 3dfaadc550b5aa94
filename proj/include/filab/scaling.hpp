// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace filab {

// Scaling exponents rho_1..rho_k >= 0 with sum 1. The renormalization acts
// on a filiform basis by X -> e^t X, Y_i -> e^{-rho_i t} Y_i.
class ScalingExponents {
 public:
  explicit ScalingExponents(std::vector<double> rho);

  int k() const noexcept { return static_cast<int>(rho_.size()); }
  // 1-based access, matching the usual indexing rho_1..rho_k.
  double operator()(int i) const { return rho_.at(static_cast<std::size_t>(i - 1)); }
  const std::vector<double>& values() const noexcept { return rho_; }

  // rho_1 > 0 and, for each i in [0, k-1], either
  // (i/(k-1)) rho_1 <= rho_{k-i} <= rho_1 or rho_1 <= rho_{k-i}.
  bool admissible(double tol = 1e-12) const;

 private:
  std::vector<double> rho_;
};

}  // namespace filab
