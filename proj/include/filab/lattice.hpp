// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "filab/scaling.hpp"

namespace filab {

// 113-bit binary floating point. Orbit lattices at time t need alpha and the
// basis to about e^{-2t} relative accuracy, beyond double past t ~ 18.
using LatticeReal = boost::multiprecision::cpp_bin_float_quad;
using RealMatrix = Eigen::Matrix<LatticeReal, Eigen::Dynamic, Eigen::Dynamic>;
using RealVector = Eigen::Matrix<LatticeReal, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

// Lattice generated by the columns of `columns`.
struct LatticeBasis {
  enum class Tag { alpha_orbit, user };
  RealMatrix columns;
  Tag tag = Tag::user;

  static LatticeBasis from_double(const Eigen::MatrixXd& columns);

  int dim() const noexcept { return static_cast<int>(columns.rows()); }
};

// diag(e^t, e^{-rho_1 t}, ..., e^{-rho_k t}).
Eigen::MatrixXd diagonal_flow_matrix(const ScalingExponents& rho, double t);

// Basis of the lattice attached to alpha at time t: the column for n_0 is
// (e^{-t}, a_1(e^{rho_1 t} - e^{-t}), ..., a_k(e^{rho_k t} - e^{-t})) and
// the column for n_i is e^{rho_i t} e_i. At t = 0 this is Z^{k+1}.
LatticeBasis alpha_lattice_basis(const std::vector<LatticeReal>& alpha,
                                 const ScalingExponents& rho, double t);
LatticeBasis alpha_lattice_basis(const std::vector<double>& alpha,
                                 const ScalingExponents& rho, double t);

struct LllResult {
  LatticeBasis basis;  // reduced; basis.columns = input.columns * transform
  IntMatrix transform;
  std::uint64_t swaps = 0;
};

LllResult lll_reduce(const LatticeBasis& basis, double delta = 0.99);

// Checks size reduction (|mu_ij| <= 1/2 + tol) and the Lovasz condition.
bool is_lll_reduced(const RealMatrix& columns, double delta, double tol = 1e-9);

struct ShortestVector {
  Eigen::VectorXd vector;
  IntVector coefficients;  // with respect to the input basis
  double length = 0.0;
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;

// Exact shortest nonzero vector: LLL preprocessing then Schnorr-Euchner
// ordered Fincke-Pohst enumeration. Throws ResourceExceeded (message carries
// the best length found) when the node budget runs out.
ShortestVector shortest_vector(const LatticeBasis& basis,
                               std::uint64_t node_budget = kDefaultNodeBudget);

// Half the systole.
double injectivity_radius(const LatticeBasis& basis);

struct InjTrajectory {
  std::vector<double> t;
  std::vector<double> inj;
  std::vector<double> log_envelope;  // running minimum of log inj
  double delta_hat = 0.0;
  double C = 0.0;
};

// delta_hat = max(0, -slope) of the least-squares line through the running
// minimum of log Inj; C = exp(intercept).
InjTrajectory inj_trajectory(const std::vector<LatticeReal>& alpha, const ScalingExponents& rho,
                             const std::vector<double>& t_grid);
InjTrajectory inj_trajectory(const std::vector<double>& alpha, const ScalingExponents& rho,
                             const std::vector<double>& t_grid);

struct IStar {
  double value = 0.0;
  double s_star = 0.0;
  bool crossing_found = false;
};

// I* (t) = I(t + s*) with s* = inf{s >= 0 : I(t+s) = 2e^{-s}} for a
// non-increasing positive I given by samples (linear interpolation).
// Returns 0 with crossing_found = false when no crossing is in range.
IStar i_star(const std::vector<double>& t_samples, const std::vector<double>& I_samples,
             double t);

// exp(-(k+1) delta t / (1 - delta)).
double width_lower_bound(double delta, int k, double t);
// (I*)^{k+1}.
double width_lower_bound_istar(double istar, int k);

// sum_{j=0}^{[log T]} e^{(1 - rho_1/(2(k-1))) j h} B_j, h = log T / [log T].
double b_hat_bound(const std::vector<double>& B, double rho1, int k, double T);
// T^{1 - rho_1/(2(k-1))} T^{(k+1) delta / (2(1-delta))}.
double b_hat_envelope(double rho1, int k, double delta, double T);

}  // namespace filab
