// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "filab/scaling.hpp"

namespace filab {

// Real polynomial, ascending coefficients.
struct Polynomial {
  std::vector<double> c;

  int degree() const noexcept;
  double operator()(double x) const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(double f) const;
};

// Linear form on the abelian ideal: lambda_i = lambda(Y_i), i = 1..k.
class RepForm {
 public:
  explicit RepForm(std::vector<double> lambda);

  int k() const noexcept { return static_cast<int>(lambda_.size()); }
  // 1-based.
  double operator()(int i) const { return lambda_.at(static_cast<std::size_t>(i - 1)); }
  const std::vector<double>& lambda() const noexcept { return lambda_; }
  // Integral when its coordinates on the eta basis are integers.
  bool integral() const noexcept { return integral_; }
  // Coordinates mu_i = lambda(eta_i).
  std::vector<double> eta_coordinates() const;

 private:
  std::vector<double> lambda_;
  bool integral_ = false;
};

// Scaling applied to the Y_i: Y_i(t) = e^{-rho_i t} Y_i. X is not rescaled.
struct Rescaling {
  double t = 0.0;
  std::optional<ScalingExponents> rho;

  double factor(int i) const;  // e^{-rho_i t}, 1 when unset
};

// Multiplier for Y_i in the model: sum_{j=0}^{k-i} lambda_{i+j} x^j / j!.
Polynomial rep_poly(const RepForm& form, int i);

struct LaplacianPolynomial {
  int k = 0;
  Polynomial poly;                     // sum_i (e^{-rho_i t} P_i)^2
  std::vector<Polynomial> components;  // scaled P_1..P_k
  Rescaling scaling;
};

LaplacianPolynomial laplacian_poly(const RepForm& form, const Rescaling& scaling = {});

// (int dx / (1 + P(x))^sigma)^{1/2} for the model Laplacian.
double dist_norm(const RepForm& form, double sigma, const Rescaling& scaling = {});
// Same for an arbitrary non-negative polynomial of even degree 2d, sigma > 1/(2d).
double dist_norm(const Polynomial& P, double sigma);
// int dx / (1 + P(x))^sigma.
double inverse_power_integral(const Polynomial& P, double sigma);

// d+1 polynomials P_i (deg i) given by normalized coefficients:
// P_i(x) = sum_j a[i][j] x^j / j!.
struct PolyFamily {
  std::vector<std::vector<double>> a;

  int d() const noexcept { return static_cast<int>(a.size()) - 1; }
  Polynomial component(int i) const;
  Polynomial sum_of_squares() const;
};

// max(|a_dd|^{-1/d}, |a_ij / a_dd|^{1/(d-j)}) over 0 <= i <= d, j <= min(i, d-1).
double p_norm(const PolyFamily& family);

// The family P_i = multiplier of Y_{k-i} (i = 0..k-1) of a form, scaled.
PolyFamily rep_family(const RepForm& form, const Rescaling& scaling = {});

struct OmegaUpsilon {
  double omega = 0.0;
  double upsilon = 0.0;
};

OmegaUpsilon omega_upsilon(const RepForm& form, const Rescaling& scaling = {});

struct ScalingFit {
  std::vector<double> t;
  std::vector<double> norms;
  double rate = 0.0;         // least-squares slope of log(norm(t)/norm(0))
  double lower_bound = 0.0;  // rho_1 / (2(k-1))
  bool meets_lower_bound = false;
};

ScalingFit scaling_check(const RepForm& form, double sigma, const ScalingExponents& rho,
                         const std::vector<double>& t_grid, double tol = 1e-6);

// Samples f(x0 + i h), i = 0..n-1.
struct SampledFunction {
  double x0 = 0.0;
  double h = 0.0;
  std::vector<double> values;

  static SampledFunction sample(const std::function<double(double)>& f, double L, double h);
  double x(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
};

struct GreenResult {
  SampledFunction u;        // int_{-inf}^x f
  SampledFunction u_right;  // -int_x^{inf} f
  double mean = 0.0;        // D(f) = int f
  double max_discrepancy = 0.0;
};

// Cumulative trapezoid quadrature. Throws ObstructionError carrying D(f)
// when |int f| > rel_tol * ||f||_2.
GreenResult green_apply(const SampledFunction& f, double rel_tol = 1e-8);

// (iint_{|y|>=|x|} (1+P(x))^tau / (1+P(y))^sigma dx dy)^{1/2}; the rescaled
// variant also carries the factor e^{-t} of the rescaled generator.
// Requires tau >= 0 and sigma - tau > 1/d (deg P = 2d).
double green_norm_bound(const RepForm& form, double sigma, double tau,
                        const Rescaling& scaling = {});
double green_norm_bound(const Polynomial& P, double sigma, double tau);

// Representative of the orbit of an integral form under Ad(e^{tX}), t in Z,
// with eta coordinate mu_{k-1} in [0, |mu_k|).
RepForm normalize_orbit_form(const RepForm& form);

std::pair<long long, long long> multiplicity_bound(const RepForm& form);

// Integral and its ratios to the two-sided polynomial-norm bounds:
// lower = I / (||P|| s^{-2 d sigma}), upper = I / ||P||, s = |a_dd|^{1/d} ||P||.
struct SandwichRatios {
  double integral = 0.0;
  double norm = 0.0;
  double s = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

SandwichRatios sandwich_ratios(const PolyFamily& family, double sigma);

// The normalized family Q_i(x) = s^{-d} P_i(||P|| x).
PolyFamily normalized_family(const PolyFamily& family);

}  // namespace filab
