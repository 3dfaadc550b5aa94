// SPDX-License-Identifier: Apache-2.0
#include "filab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "filab/error.hpp"

namespace filab {

namespace {

using Real = LatticeReal;

struct GramSchmidt {
  RealMatrix mu;    // mu(i, j) for j < i
  RealVector norm2;  // |b*_i|^2
};

GramSchmidt gram_schmidt(const RealMatrix& b) {
  const int n = static_cast<int>(b.cols());
  GramSchmidt gs{RealMatrix::Zero(n, n), RealVector::Zero(n)};
  RealMatrix star = b;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      gs.mu(i, j) = b.col(i).dot(star.col(j)) / gs.norm2(j);
      star.col(i) -= gs.mu(i, j) * star.col(j);
    }
    gs.norm2(i) = star.col(i).squaredNorm();
    if (!(gs.norm2(i) > 0) || !boost::multiprecision::isfinite(gs.norm2(i)))
      throw NumericalFailure("degenerate basis in Gram-Schmidt");
  }
  return gs;
}

class Enumerator {
 public:
  Enumerator(const GramSchmidt& gs, std::uint64_t budget)
      : gs_(gs), n_(static_cast<int>(gs.norm2.size())), budget_(budget), x_(n_, 0) {}

  void run(const Real& radius2) {
    best2_ = radius2;
    descend(n_ - 1, Real(0));
  }

  bool improved() const noexcept { return !best_.empty(); }
  const std::vector<long long>& best() const noexcept { return best_; }
  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  void descend(int i, const Real& partial) {
    Real c = 0;
    for (int j = i + 1; j < n_; ++j) c -= x_[j] * gs_.mu(j, i);
    const long long x0 = llround(c);
    long long up = x0 + 1, down = x0 - 1;
    long long cur = x0;
    while (true) {
      if (++nodes_ > budget_)
        throw ResourceExceeded("enumeration node budget exhausted; best length " +
                               std::to_string(sqrt(best2_).convert_to<double>()));
      const Real diff = Real(cur) - c;
      const Real d = partial + diff * diff * gs_.norm2(i);
      if (d >= best2_) break;
      x_[i] = cur;
      if (i == 0) {
        if (d > 0) {
          best2_ = d;
          best_ = x_;
        }
      } else {
        descend(i - 1, d);
      }
      // Next candidate in order of distance from the centre.
      if (abs(Real(up) - c) <= abs(Real(down) - c)) {
        cur = up++;
      } else {
        cur = down--;
      }
    }
    x_[i] = 0;
  }

  const GramSchmidt& gs_;
  int n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<long long> x_;
  std::vector<long long> best_;
  Real best2_ = 0;
};

}  // namespace

LatticeBasis LatticeBasis::from_double(const Eigen::MatrixXd& columns) {
  LatticeBasis b;
  b.columns = columns.cast<LatticeReal>();
  return b;
}

Eigen::MatrixXd diagonal_flow_matrix(const ScalingExponents& rho, double t) {
  const int k = rho.k();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k + 1, k + 1);
  g(0, 0) = std::exp(t);
  for (int i = 1; i <= k; ++i) g(i, i) = std::exp(-rho(i) * t);
  return g;
}

LatticeBasis alpha_lattice_basis(const std::vector<LatticeReal>& alpha,
                                 const ScalingExponents& rho, double t) {
  const int k = rho.k();
  require(static_cast<int>(alpha.size()) == k, "alpha and rho must have the same length");
  LatticeBasis b;
  b.tag = LatticeBasis::Tag::alpha_orbit;
  b.columns = RealMatrix::Zero(k + 1, k + 1);
  const Real et = exp(Real(-t));
  b.columns(0, 0) = et;
  for (int i = 1; i <= k; ++i) {
    const Real grow = exp(Real(rho(i)) * Real(t));
    b.columns(i, 0) = alpha[i - 1] * (grow - et);
    b.columns(i, i) = grow;
  }
  return b;
}

LatticeBasis alpha_lattice_basis(const std::vector<double>& alpha,
                                 const ScalingExponents& rho, double t) {
  return alpha_lattice_basis(std::vector<LatticeReal>(alpha.begin(), alpha.end()), rho, t);
}

LllResult lll_reduce(const LatticeBasis& basis, double delta) {
  require(delta > 0.25 && delta < 1.0, "LLL delta must lie in (1/4, 1)");
  RealMatrix b = basis.columns;
  const int n = static_cast<int>(b.cols());
  require(n >= 1 && b.rows() >= n, "basis must have full column rank shape");
  require(n <= 12, "lattice reduction supports dim <= 12");
  IntMatrix U = IntMatrix::Identity(n, n);
  GramSchmidt gs = gram_schmidt(b);
  LllResult out;
  constexpr std::uint64_t kMaxSwaps = 10'000'000;
  const Real d(delta);
  int k = 1;
  while (k < n) {
    for (int j = k - 1; j >= 0; --j) {
      const Real q = round(gs.mu(k, j));
      if (q == 0) continue;
      if (abs(q) > Real(9.0e15)) throw NumericalFailure("LLL coefficient overflow");
      const auto qi = q.convert_to<long long>();
      b.col(k) -= q * b.col(j);
      U.col(k) -= qi * U.col(j);
      for (int l = 0; l < j; ++l) gs.mu(k, l) -= q * gs.mu(j, l);
      gs.mu(k, j) -= q;
    }
    const Real lhs = gs.norm2(k);
    const Real rhs = (d - gs.mu(k, k - 1) * gs.mu(k, k - 1)) * gs.norm2(k - 1);
    if (lhs >= rhs) {
      ++k;
      continue;
    }
    b.col(k).swap(b.col(k - 1));
    U.col(k).swap(U.col(k - 1));
    if (++out.swaps > kMaxSwaps) throw NumericalFailure("LLL did not converge");
    gs = gram_schmidt(b);
    k = std::max(k - 1, 1);
  }
  out.basis.columns = std::move(b);
  out.basis.tag = basis.tag;
  out.transform = std::move(U);
  return out;
}

bool is_lll_reduced(const RealMatrix& columns, double delta, double tol) {
  const GramSchmidt gs = gram_schmidt(columns);
  const int n = static_cast<int>(columns.cols());
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j)
      if (abs(gs.mu(i, j)) > Real(0.5 + tol)) return false;
    const Real mu = gs.mu(i, i - 1);
    if (gs.norm2(i) < (Real(delta) - mu * mu) * gs.norm2(i - 1) * Real(1.0 - tol)) return false;
  }
  return true;
}

ShortestVector shortest_vector(const LatticeBasis& basis, std::uint64_t node_budget) {
  const LllResult red = lll_reduce(basis, 0.99);
  const RealMatrix& b = red.basis.columns;
  const int n = static_cast<int>(b.cols());
  int shortest_col = 0;
  for (int i = 1; i < n; ++i)
    if (b.col(i).squaredNorm() < b.col(shortest_col).squaredNorm()) shortest_col = i;

  const GramSchmidt gs = gram_schmidt(b);
  Enumerator en(gs, node_budget);
  en.run(b.col(shortest_col).squaredNorm());

  IntVector x = IntVector::Zero(n);
  if (en.improved()) {
    for (int i = 0; i < n; ++i) x(i) = en.best()[i];
  } else {
    x(shortest_col) = 1;
  }
  ShortestVector sv;
  sv.coefficients = red.transform * x;
  // Evaluate on the input basis to avoid drift in the reduced columns.
  const RealVector v = basis.columns * sv.coefficients.cast<LatticeReal>();
  sv.vector = v.cast<double>();
  sv.length = sqrt(v.squaredNorm()).convert_to<double>();
  sv.nodes = en.nodes();
  return sv;
}

double injectivity_radius(const LatticeBasis& basis) {
  return 0.5 * shortest_vector(basis).length;
}

InjTrajectory inj_trajectory(const std::vector<double>& alpha, const ScalingExponents& rho,
                             const std::vector<double>& t_grid) {
  return inj_trajectory(std::vector<LatticeReal>(alpha.begin(), alpha.end()), rho, t_grid);
}

InjTrajectory inj_trajectory(const std::vector<LatticeReal>& alpha, const ScalingExponents& rho,
                             const std::vector<double>& t_grid) {
  require(t_grid.size() >= 2, "t grid needs at least two points");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    require(t_grid[i] > t_grid[i - 1], "t grid must be increasing");
  InjTrajectory tr;
  tr.t = t_grid;
  double running = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    const double inj = injectivity_radius(alpha_lattice_basis(alpha, rho, t));
    tr.inj.push_back(inj);
    running = std::min(running, std::log(inj));
    tr.log_envelope.push_back(running);
  }
  const auto n = static_cast<double>(t_grid.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    st += t_grid[i];
    sy += tr.log_envelope[i];
    stt += t_grid[i] * t_grid[i];
    sty += t_grid[i] * tr.log_envelope[i];
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  const double intercept = (sy - slope * st) / n;
  tr.delta_hat = std::max(0.0, -slope);
  tr.C = std::exp(intercept);
  return tr;
}

IStar i_star(const std::vector<double>& t_samples, const std::vector<double>& I_samples,
             double t) {
  require(t_samples.size() == I_samples.size() && t_samples.size() >= 2,
          "need matching samples of I (at least two)");
  for (std::size_t i = 1; i < t_samples.size(); ++i)
    require(t_samples[i] > t_samples[i - 1], "sample times must be increasing");
  require(t >= t_samples.front() && t <= t_samples.back(), "t outside the sampled range");
  for (std::size_t i = 0; i < I_samples.size(); ++i) {
    require(I_samples[i] > 0.0, "I must be positive");
    require(i == 0 || I_samples[i] <= I_samples[i - 1], "I must be non-increasing");
  }

  auto interp = [&](double u) {
    const auto it = std::upper_bound(t_samples.begin(), t_samples.end(), u);
    if (it == t_samples.end()) return I_samples.back();
    const std::size_t hi = static_cast<std::size_t>(it - t_samples.begin());
    const std::size_t lo = hi - 1;
    const double w = (u - t_samples[lo]) / (t_samples[hi] - t_samples[lo]);
    return I_samples[lo] + w * (I_samples[hi] - I_samples[lo]);
  };
  auto g = [&](double s) { return interp(t + s) - 2.0 * std::exp(-s); };

  IStar out;
  if (g(0.0) >= 0.0) {
    out.s_star = 0.0;
    out.value = interp(t);
    out.crossing_found = true;
    return out;
  }
  // g is continuous and g(0) < 0: locate the first sign change on the sample
  // breakpoints (the infimum of the zero set) and bisect inside it.
  std::vector<double> nodes{0.0};
  for (double ts : t_samples)
    if (ts > t) nodes.push_back(ts - t);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    // Refine each linear piece: I is linear there but 2e^{-s} is convex, so
    // split into a few subintervals before testing signs.
    constexpr int kSub = 16;
    double a = nodes[i - 1];
    for (int j = 1; j <= kSub; ++j) {
      const double b = nodes[i - 1] + (nodes[i] - nodes[i - 1]) * j / kSub;
      const double gb = g(b);
      if (gb >= 0.0) {
        double lo = a, hi = b;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
          const double mid = 0.5 * (lo + hi);
          if (g(mid) >= 0.0) hi = mid; else lo = mid;
        }
        out.s_star = hi;
        out.value = interp(t + hi);
        out.crossing_found = true;
        return out;
      }
      a = b;
    }
  }
  return out;
}

double width_lower_bound(double delta, int k, double t) {
  require(delta >= 0.0 && delta < 1.0, "delta must lie in [0, 1)");
  require(k >= 1, "k must be >= 1");
  require(t >= 0.0, "t must be >= 0");
  return std::exp(-(k + 1) * delta * t / (1.0 - delta));
}

double width_lower_bound_istar(double istar, int k) {
  require(istar >= 0.0, "I* must be >= 0");
  require(k >= 1, "k must be >= 1");
  return std::pow(istar, k + 1);
}

double b_hat_bound(const std::vector<double>& B, double rho1, int k, double T) {
  require(k >= 2, "k must be >= 2");
  require(T >= std::exp(1.0), "T must be >= e");
  const auto J = static_cast<std::size_t>(std::floor(std::log(T)));
  require(B.size() >= J + 1, "need B_j for j = 0..[log T]");
  const double h = std::log(T) / static_cast<double>(J);
  const double e = 1.0 - rho1 / (2.0 * (k - 1));
  double sum = 0.0;
  for (std::size_t j = 0; j <= J; ++j) sum += std::exp(e * static_cast<double>(j) * h) * B[j];
  return sum;
}

double b_hat_envelope(double rho1, int k, double delta, double T) {
  require(k >= 2, "k must be >= 2");
  require(delta >= 0.0 && delta < 1.0, "delta must lie in [0, 1)");
  require(T > 0.0, "T must be positive");
  return std::pow(T, 1.0 - rho1 / (2.0 * (k - 1))) *
         std::pow(T, (k + 1) * delta / (2.0 * (1.0 - delta)));
}

}  // namespace filab
