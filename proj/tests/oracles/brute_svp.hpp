// SPDX-License-Identifier: Apache-2.0
// Shortest nonzero vector by exhaustive search over coefficient boxes.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// min |B c| over nonzero integer c with |c_j| <= bound[j].
inline double box_shortest(const Eigen::MatrixXd& basis, const std::vector<int>& bound) {
  const auto n = basis.cols();
  std::vector<int> c(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = -bound[static_cast<std::size_t>(j)];
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    bool zero = true;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.rows());
    for (Eigen::Index j = 0; j < n; ++j) {
      const int cj = c[static_cast<std::size_t>(j)];
      if (cj != 0) {
        zero = false;
        v += cj * basis.col(j);
      }
    }
    if (!zero) best = std::min(best, v.norm());
    Eigen::Index j = 0;
    while (j < n && c[static_cast<std::size_t>(j)] == bound[static_cast<std::size_t>(j)]) {
      c[static_cast<std::size_t>(j)] = -bound[static_cast<std::size_t>(j)];
      ++j;
    }
    if (j == n) break;
    ++c[static_cast<std::size_t>(j)];
  }
  return best;
}

inline double brute_force_shortest(const Eigen::MatrixXd& basis, int box = 4) {
  return box_shortest(basis, std::vector<int>(static_cast<std::size_t>(basis.cols()), box));
}

// Exact systole of a square nonsingular basis: plain Pohst enumeration of
// all c with |B c| <= r on the Cholesky factor of the Gram matrix, in natural
// coordinate order, without basis reduction. r defaults to the shortest
// column. Returns nullopt after `max_nodes` search nodes.
inline std::optional<double> exact_shortest(const Eigen::MatrixXd& basis,
                                            double r = std::numeric_limits<double>::infinity(),
                                            double max_nodes = 5e7) {
  const auto n = basis.cols();
  for (Eigen::Index j = 0; j < n; ++j) r = std::min(r, basis.col(j).norm());
  // G = R^T R, R upper triangular.
  const Eigen::MatrixXd R = (basis.transpose() * basis).llt().matrixU();
  const double r2 = r * r * (1 + 1e-9);
  double best = r * r;
  double nodes = 0;
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  // Level i fixes c_i given c_{i+1..n-1}; `rest` is the partial squared norm.
  auto recurse = [&](auto&& self, Eigen::Index i, double rest) -> bool {
    if (++nodes > max_nodes) return false;
    double center = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) center -= R(i, j) * c[static_cast<std::size_t>(j)];
    center /= R(i, i);
    const double span = std::sqrt(std::max(0.0, r2 - rest)) / std::abs(R(i, i));
    for (double x = std::ceil(center - span); x <= std::floor(center + span); x += 1.0) {
      c[static_cast<std::size_t>(i)] = x;
      const double d = R(i, i) * (x - center);
      const double part = rest + d * d;
      if (part > r2) continue;
      if (i == 0) {
        bool zero = true;
        for (double v : c) zero = zero && v == 0.0;
        if (!zero) best = std::min(best, part);
      } else if (!self(self, i - 1, part)) {
        return false;
      }
    }
    c[static_cast<std::size_t>(i)] = 0.0;
    return true;
  };
  if (!recurse(recurse, n - 1, 0.0)) return std::nullopt;
  return std::sqrt(best);
}

}  // namespace oracle
