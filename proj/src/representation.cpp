// SPDX-License-Identifier: Apache-2.0
#include "filab/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "filab/algebra.hpp"
#include "filab/error.hpp"

namespace filab {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr unsigned kMaxDepth = 20;
constexpr double kQuadTol = 1e-10;
constexpr double kHalfPi = std::numbers::pi / 2;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Size of the roots of P: max(|c_n|^{-1/n}, |c_j / c_n|^{1/(n-j)}).
double root_scale(const Polynomial& P) {
  const int n = P.degree();
  const double lead = std::abs(P.c[static_cast<std::size_t>(n)]);
  double s = std::pow(lead, -1.0 / n);
  for (int j = 0; j < n; ++j)
    s = std::max(s, std::pow(std::abs(P.c[static_cast<std::size_t>(j)]) / lead, 1.0 / (n - j)));
  return s;
}

void check_even_positive(const Polynomial& P) {
  const int n = P.degree();
  require(n >= 2 && n % 2 == 0, "polynomial must have even positive degree");
  require(P.c[static_cast<std::size_t>(n)] > 0.0, "leading coefficient must be positive");
}

template <class F>
double integrate_checked(F f, double a, double b, double tol, const char* what) {
  double err = 0.0;
  const double v = GK::integrate(f, a, b, kMaxDepth, tol, &err);
  if (!std::isfinite(v) || err > 1e-6 * std::max(std::abs(v), 1e-300))
    throw NumericalFailure(std::string("quadrature did not converge: ") + what);
  return v;
}

// (1+P(x))^{-sigma} guarded against overflow near the compactified ends.
double inv_power(const Polynomial& P, double x, double sigma) {
  const double p = P(x);
  if (!std::isfinite(p)) return 0.0;
  return std::pow(1.0 + p, -sigma);
}

std::vector<std::vector<double>> s_matrix(int k) {
  const RMat S = vergne_from_eta(k);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(k),
                                       std::vector<double>(static_cast<std::size_t>(k)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      out[i][j] = boost::rational_cast<double>(S[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return out;
}

bool is_integer(double v) { return std::abs(v - std::nearbyint(v)) <= 1e-9 * std::max(1.0, std::abs(v)); }

void check_rescaling(const RepForm& form, const Rescaling& sc) {
  if (sc.rho) require(sc.rho->k() == form.k(), "rho and lambda must have the same length");
  require(sc.t == 0.0 || sc.rho.has_value(), "rescaling with t != 0 needs rho");
}

}  // namespace

int Polynomial::degree() const noexcept {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    if (c[static_cast<std::size_t>(i)] != 0.0) return i;
  return -1;
}

double Polynomial::operator()(double x) const {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r;
  r.c.assign(std::max(c.size(), o.c.size()), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
  for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  if (c.empty() || o.c.empty()) return r;
  r.c.assign(c.size() + o.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
  return r;
}

Polynomial Polynomial::scaled(double f) const {
  Polynomial r = *this;
  for (double& v : r.c) v *= f;
  return r;
}

RepForm::RepForm(std::vector<double> lambda) : lambda_(std::move(lambda)) {
  require(lambda_.size() >= 2, "representation forms need k >= 2");
  for (double v : lambda_) require(std::isfinite(v), "lambda must be finite");
  require(lambda_.back() != 0.0, "lambda_k must be nonzero");
  const auto mu = eta_coordinates();
  integral_ = std::all_of(mu.begin(), mu.end(), is_integer);
}

std::vector<double> RepForm::eta_coordinates() const {
  // lambda(Y_i) = sum_j S_ij mu_j with S unit upper triangular.
  const int n = k();
  const auto S = s_matrix(n);
  std::vector<double> mu(lambda_);
  for (int i = n - 1; i >= 0; --i)
    for (int j = i + 1; j < n; ++j) mu[i] -= S[i][j] * mu[j];
  return mu;
}

double Rescaling::factor(int i) const {
  if (!rho || t == 0.0) return 1.0;
  return std::exp(-(*rho)(i)*t);
}

Polynomial rep_poly(const RepForm& form, int i) {
  const int k = form.k();
  require(i >= 1 && i <= k, "index out of range");
  Polynomial p;
  for (int j = 0; j <= k - i; ++j) p.c.push_back(form(i + j) / factorial(j));
  return p;
}

LaplacianPolynomial laplacian_poly(const RepForm& form, const Rescaling& scaling) {
  check_rescaling(form, scaling);
  LaplacianPolynomial L;
  L.k = form.k();
  L.scaling = scaling;
  for (int i = 1; i <= L.k; ++i) {
    const Polynomial Pi = rep_poly(form, i).scaled(scaling.factor(i));
    L.poly = L.poly + Pi * Pi;
    L.components.push_back(Pi);
  }
  return L;
}

double inverse_power_integral(const Polynomial& P, double sigma) {
  check_even_positive(P);
  const int n = P.degree();
  require(sigma > 1.0 / n, "sigma must exceed 1/(2d) for convergence");
  const double s = root_scale(P);
  auto f = [&](double th) {
    const double c = std::cos(th);
    const double w = inv_power(P, s * std::tan(th), sigma);
    return w == 0.0 ? 0.0 : s * w / (c * c);
  };
  return integrate_checked(f, -kHalfPi, kHalfPi, kQuadTol, "inverse power integral");
}

double dist_norm(const Polynomial& P, double sigma) {
  return std::sqrt(inverse_power_integral(P, sigma));
}

double dist_norm(const RepForm& form, double sigma, const Rescaling& scaling) {
  require(sigma > 1.0 / (2.0 * (form.k() - 1)), "sigma must exceed 1/(2(k-1))");
  return dist_norm(laplacian_poly(form, scaling).poly, sigma);
}

Polynomial PolyFamily::component(int i) const {
  Polynomial p;
  const auto& row = a.at(static_cast<std::size_t>(i));
  for (std::size_t j = 0; j < row.size(); ++j) p.c.push_back(row[j] / factorial(static_cast<int>(j)));
  return p;
}

Polynomial PolyFamily::sum_of_squares() const {
  Polynomial P;
  for (int i = 0; i <= d(); ++i) {
    const Polynomial q = component(i);
    P = P + q * q;
  }
  return P;
}

double p_norm(const PolyFamily& family) {
  const int d = family.d();
  require(d >= 1, "need at least two polynomials");
  for (int i = 0; i <= d; ++i)
    require(family.a[static_cast<std::size_t>(i)].size() == static_cast<std::size_t>(i) + 1,
            "P_i needs i+1 coefficients");
  const double add = family.a[d][d];
  require(add != 0.0, "leading coefficient a_dd must be nonzero");
  double m = std::pow(std::abs(add), -1.0 / d);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= std::min(i, d - 1); ++j)
      m = std::max(m, std::pow(std::abs(family.a[i][j] / add), 1.0 / (d - j)));
  return m;
}

PolyFamily rep_family(const RepForm& form, const Rescaling& scaling) {
  check_rescaling(form, scaling);
  const int k = form.k();
  PolyFamily fam;
  for (int i = 0; i <= k - 1; ++i) {
    std::vector<double> row;
    const double f = scaling.factor(k - i);
    for (int j = 0; j <= i; ++j) row.push_back(f * form(k - i + j));
    fam.a.push_back(std::move(row));
  }
  return fam;
}

OmegaUpsilon omega_upsilon(const RepForm& form, const Rescaling& scaling) {
  const PolyFamily fam = rep_family(form, scaling);
  const int d = fam.d();
  OmegaUpsilon out;
  out.omega = p_norm(fam);
  out.upsilon = std::pow(out.omega, d) * std::abs(fam.a[d][d]);
  return out;
}

ScalingFit scaling_check(const RepForm& form, double sigma, const ScalingExponents& rho,
                         const std::vector<double>& t_grid, double tol) {
  require(rho.admissible(), "rho must be admissible");
  require(!t_grid.empty(), "empty t grid");
  ScalingFit fit;
  fit.lower_bound = rho(1) / (2.0 * (form.k() - 1));
  const double base = dist_norm(form, sigma);
  std::vector<double> ts{0.0}, ys{0.0};
  for (double t : t_grid) {
    const double v = dist_norm(form, sigma, Rescaling{t, rho});
    fit.t.push_back(t);
    fit.norms.push_back(v);
    if (t == 0.0) continue;
    ts.push_back(t);
    ys.push_back(std::log(v / base));
  }
  const auto n = static_cast<double>(ts.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  const double den = n * stt - st * st;
  fit.rate = den > 0.0 ? (n * sty - st * sy) / den : 0.0;
  fit.meets_lower_bound = fit.rate >= fit.lower_bound - tol;
  return fit;
}

SampledFunction SampledFunction::sample(const std::function<double(double)>& f, double L,
                                        double h) {
  require(L > 0.0 && h > 0.0 && h < L, "need 0 < h < L");
  const auto n = static_cast<std::size_t>(std::llround(2.0 * L / h)) + 1;
  SampledFunction s;
  s.x0 = -L;
  s.h = 2.0 * L / static_cast<double>(n - 1);
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.values[i] = f(s.x(i));
  return s;
}

GreenResult green_apply(const SampledFunction& f, double rel_tol) {
  const std::size_t n = f.values.size();
  require(n >= 3 && f.h > 0.0, "need at least three samples");
  GreenResult r;
  r.u = SampledFunction{f.x0, f.h, std::vector<double>(n, 0.0)};
  double sq = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    r.u.values[i] = r.u.values[i - 1] + 0.5 * f.h * (f.values[i - 1] + f.values[i]);
    sq += 0.5 * f.h * (f.values[i - 1] * f.values[i - 1] + f.values[i] * f.values[i]);
  }
  r.mean = r.u.values.back();
  if (std::abs(r.mean) > rel_tol * std::sqrt(sq))
    throw ObstructionError("invariant distribution does not vanish on f", r.mean);
  r.u_right = SampledFunction{f.x0, f.h, std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    r.u_right.values[i] = r.u.values[i] - r.mean;
    r.max_discrepancy = std::max(r.max_discrepancy, std::abs(r.u_right.values[i] - r.u.values[i]));
  }
  return r;
}

double green_norm_bound(const Polynomial& P, double sigma, double tau) {
  check_even_positive(P);
  const int d = P.degree() / 2;
  require(tau >= 0.0, "tau must be >= 0");
  require(sigma - tau > 1.0 / d, "need sigma - tau > 1/d for the double integral to converge");
  const double s = root_scale(P);
  // Integrate over y first: int_{-inf}^{inf} (1+P(y))^{-sigma} W(|y|) dy with
  // W(r) = int_{-r}^{r} (1+P(x))^tau dx, on y = s u, u in [0, inf).
  // Pieces [0, s], [s, 2s], [2s, 4s], ... keep each GK call well scaled.
  auto W = [&](double r) {
    if (tau == 0.0) return 2.0 * r;
    auto g = [&](double x) { return std::pow(1.0 + P(x), tau) + std::pow(1.0 + P(-x), tau); };
    double total = 0.0, a = 0.0, b = s;
    while (a < r) {
      total += boost::math::quadrature::gauss<double, 30>::integrate(g, a, std::min(b, r));
      a = b;
      b *= 2.0;
    }
    return total;
  };
  auto f = [&](double u) {
    const double y = s * u;
    const double w = inv_power(P, y, sigma) + inv_power(P, -y, sigma);
    if (w == 0.0) return 0.0;
    const double v = s * w * W(y);
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  const double v = integrator.integrate(f, 1e-10, &err, &l1);
  if (!std::isfinite(v) || err > 1e-6 * std::max(std::abs(v), 1e-300))
    throw NumericalFailure("quadrature did not converge: Green double integral");
  return std::sqrt(v);
}

double green_norm_bound(const RepForm& form, double sigma, double tau,
                        const Rescaling& scaling) {
  const double v = green_norm_bound(laplacian_poly(form, scaling).poly, sigma, tau);
  return scaling.rho ? std::exp(-scaling.t) * v : v;
}

RepForm normalize_orbit_form(const RepForm& form) {
  require(form.integral(), "orbit normalization needs an integral form");
  const int k = form.k();
  std::vector<long long> mu;
  for (double v : form.eta_coordinates()) mu.push_back(std::llround(v));
  const long long mk = mu[k - 1], mk1 = mu[k - 2];
  const long long a = std::abs(mk);
  // floor division
  const long long q = mk1 / a - ((mk1 % a != 0 && mk1 < 0) ? 1 : 0);
  const long long t = mk > 0 ? -q : q;
  // mu'_i = sum_l C(t, l) mu_{i+l}
  std::vector<double> mu_new(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < k; ++i)
    for (int l = 0; i + l < k; ++l)
      mu_new[i] += std::nearbyint(gen_binomial(static_cast<double>(t), l)) * static_cast<double>(mu[i + l]);
  const auto S = s_matrix(k);
  std::vector<double> lambda(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) lambda[i] += S[i][j] * mu_new[j];
  return RepForm(std::move(lambda));
}

std::pair<long long, long long> multiplicity_bound(const RepForm& form) {
  require(form.integral(), "multiplicity bound needs an integral form");
  return {1, std::llabs(std::llround(form(form.k())))};
}

PolyFamily normalized_family(const PolyFamily& family) {
  const double norm = p_norm(family);
  const int d = family.d();
  const double s = std::pow(std::abs(family.a[d][d]), 1.0 / d) * norm;
  PolyFamily q = family;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= i; ++j) q.a[i][j] *= std::pow(s, -d) * std::pow(norm, j);
  return q;
}

SandwichRatios sandwich_ratios(const PolyFamily& family, double sigma) {
  const int d = family.d();
  SandwichRatios r;
  r.norm = p_norm(family);
  r.s = std::pow(std::abs(family.a[d][d]), 1.0 / d) * r.norm;
  r.integral = inverse_power_integral(family.sum_of_squares(), sigma);
  r.upper = r.integral / r.norm;
  r.lower = r.integral / (r.norm * std::pow(r.s, -2.0 * d * sigma));
  return r;
}

}  // namespace filab
