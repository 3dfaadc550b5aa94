// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, with its runtime.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "../oracles/brute_svp.hpp"
#include "../oracles/exact_phase.hpp"

#include "filab/algebra.hpp"
#include "filab/diophantine.hpp"
#include "filab/dynamics.hpp"
#include "filab/error.hpp"
#include "filab/harness.hpp"
#include "filab/lattice.hpp"
#include "filab/representation.hpp"

using namespace filab;
using std::numbers::pi;

namespace {

// Tolerances and budgets.
constexpr double kGaussTol = 1e-10;
constexpr double kClosedFormTol = 1e-9;
constexpr double kQuadSlopeLo = 0.35, kQuadSlopeHi = 0.65;
constexpr double kCubicSlopeSlack = 0.05;
constexpr double kRatioStability = 2.0;
constexpr double kScalingTol = 1e-6;
constexpr double kQuadratureTol = 1e-8;
constexpr double kSvpRelTol = 1e-12;
constexpr double kDeltaHatMax = 0.05;
constexpr double kInjFloor = 0.2520;  // measured min Inj of the golden trajectory
constexpr double kInjFloorFactor = 0.9;
constexpr double kGreenTol = 1e-6;
constexpr double kNuGoldenLo = 0.95, kNuGoldenHi = 1.05;
constexpr double kNuLiouvilleMin = 3.0;

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

unsigned worker_threads() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

Outcome gauss_sum() {
  const MonomialPoly p{{0.2, 0.0}, 0.0};
  const double fl = std::abs(weyl_sum_direct(p, 1, 5, Arith::float64).value);
  const auto sd = monomial_to_section(p, Arith::fixed64);
  const auto P = section_polynomial(sd.sys, sd.s);
  // Exact big-integer phases of the dyadic rounding, then the 5-term sum.
  bool bits = true;
  std::complex<double> oracle_sum{0.0, 0.0};
  auto q = sd.s;
  for (std::uint64_t n = 0; n < 5; ++n) {
    const std::uint64_t ph = oracle::fixed_phase(P.c.fx, n);
    bits = bits && q.fx.back() == ph && P.eval_fixed(n) == ph;
    oracle_sum += std::polar(1.0, 2.0 * pi * std::ldexp(static_cast<double>(ph), -64));
    q = step(sd.sys, q);
  }
  const auto fx = weyl_sum_skew(sd.sys, sd.s, 1, 5).value;
  const bool ok = std::abs(fl - std::sqrt(5.0)) <= kGaussTol &&
                  std::abs(std::abs(fx) - std::sqrt(5.0)) <= kGaussTol && bits &&
                  std::abs(fx - oracle_sum) <= 1e-12;
  return {ok, fmt::format("float |W|-sqrt5={:.1e} fixed |W|-sqrt5={:.1e} phases_exact={}",
                          fl - std::sqrt(5.0), std::abs(fx) - std::sqrt(5.0), bits)};
}

Outcome closed_form() {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> kd(1, 5);
  std::uniform_int_distribution<std::uint64_t> nd(0, 1000);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int k = kd(gen);
    std::vector<double> a(static_cast<std::size_t>(k)), s(static_cast<std::size_t>(k));
    for (auto& x : a) x = u(gen);
    for (auto& x : s) x = u(gen);
    const Arith mode = rep % 2 ? Arith::fixed64 : Arith::float64;
    const SkewShiftSystem sys(a, mode);
    const auto p = TorusPoint::from_doubles(s, mode);
    const std::uint64_t N = nd(gen);
    const auto it = iterate(sys, p, N).to_doubles();
    const auto cf = iterate_closed_form(sys, p, N).to_doubles();
    for (std::size_t i = 0; i < it.size(); ++i) worst = std::max(worst, circle::distance(it[i], cf[i]));
  }
  return {worst <= kClosedFormTol, fmt::format("max circle distance {:.2e}", worst)};
}

Outcome quadratic_slope() {
  SweepConfig cfg;
  cfg.k = 2;
  cfg.alpha = {std::sqrt(2.0), 0.0};
  cfg.seed = 1;
  cfg.schedule = dyadic_schedule(8, 22);
  cfg.threads = worker_threads();
  const auto fit = slope_fit(dyadic_weyl_sweep(cfg));
  return {fit.slope >= kQuadSlopeLo && fit.slope <= kQuadSlopeHi,
          fmt::format("slope {:.4f} r2 {:.3f}", fit.slope, fit.r2)};
}

Outcome cubic_bound() {
  // 16 geometric points per octave between 2^8 and 2^20.
  std::vector<std::uint64_t> schedule;
  for (int i = 0; i <= 12 * 16; ++i) {
    const auto N = static_cast<std::uint64_t>(std::llround(std::exp2(8.0 + i / 16.0)));
    if (schedule.empty() || N > schedule.back()) schedule.push_back(N);
  }
  double ratios[2];
  double slopes[2];
  for (int seed = 1; seed <= 2; ++seed) {
    SweepConfig cfg;
    cfg.k = 3;
    cfg.alpha = {std::sqrt(2.0) - 1.0, 0.0, 0.0};
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.schedule = schedule;
    cfg.threads = worker_threads();
    const auto fit = bound_check(dyadic_weyl_sweep(cfg), 3, Regime::strong);
    ratios[seed - 1] = fit.max_ratio;
    slopes[seed - 1] = fit.slope;
  }
  const double limit = 5.0 / 6 + kCubicSlopeSlack;
  const double spread = std::max(ratios[0], ratios[1]) / std::min(ratios[0], ratios[1]);
  return {slopes[0] <= limit && slopes[1] <= limit && spread <= kRatioStability,
          fmt::format("slopes {:.4f},{:.4f} max_ratio {:.4f},{:.4f} spread x{:.2f}", slopes[0],
                      slopes[1], ratios[0], ratios[1], spread)};
}

Outcome scaling_law() {
  double worst = 0.0;
  for (int k : {2, 3}) {
    std::vector<double> lam(static_cast<std::size_t>(k), 0.0);
    lam.back() = 1.0;
    const RepForm f(lam);
    const auto rho = optimal_rho(k);
    const double base = dist_norm(f, 1.0);
    for (double t : {2.0, 4.0, 6.0}) {
      const double r = dist_norm(f, 1.0, Rescaling{t, rho}) / base;
      worst = std::max(worst, std::abs(r / std::exp(t / (k * (k - 1.0))) - 1.0));
    }
  }
  return {worst <= kScalingTol, fmt::format("max relative error {:.2e}", worst)};
}

Outcome quadrature() {
  const double a = std::abs(dist_norm(Polynomial{{0.0, 0.0, 1.0}}, 1.0) - std::sqrt(pi));
  const double b = std::abs(dist_norm(RepForm({0.0, 1.0}), 1.0) - std::sqrt(pi / std::sqrt(2.0)));
  return {a <= kQuadratureTol && b <= kQuadratureTol,
          fmt::format("errors {:.1e}, {:.1e}", a, b)};
}

Outcome svp() {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> e(-5, 5);
  int mismatches = 0, outside_box = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rep % 5;
    Eigen::MatrixXd b(n, n);
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = e(gen);
    } while (std::abs(b.determinant()) < 0.5);
    const double got = shortest_vector(LatticeBasis::from_double(b)).length;
    const double box = oracle::brute_force_shortest(b, 4);
    const auto exact = oracle::exact_shortest(b);
    if (got > box * (1 + kSvpRelTol) || !exact || std::abs(got - *exact) > kSvpRelTol * *exact)
      ++mismatches;
    if (got < box * (1 - kSvpRelTol)) ++outside_box;
  }
  const double inj0 = injectivity_radius(alpha_lattice_basis(
      std::vector<double>{(1 + std::sqrt(5.0)) / 2, 0.0}, ScalingExponents({1.0, 0.0}), 0.0));
  return {mismatches == 0 && inj0 == 0.5,
          fmt::format("mismatches {}/200 (systole outside [-4,4] box: {}), inj at t=0 {}",
                      mismatches, outside_box, inj0)};
}

Outcome golden_trajectory() {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(0.25 * i);
  const LatticeReal phi = (1 + sqrt(LatticeReal(5))) / 2;
  const auto tr = inj_trajectory(std::vector<LatticeReal>{phi, LatticeReal(0)},
                                 ScalingExponents({1.0, 0.0}), grid);
  const double mn = *std::min_element(tr.inj.begin(), tr.inj.end());
  return {tr.delta_hat <= kDeltaHatMax && mn >= kInjFloorFactor * kInjFloor,
          fmt::format("delta_hat {:.4f} min Inj {:.5f} (floor {:.4f})", tr.delta_hat, mn,
                      kInjFloorFactor * kInjFloor)};
}

Outcome green() {
  double worst = 0.0;
  const std::function<double(double)> fs[] = {
      [](double x) { return -2 * x * std::exp(-x * x); },
      [](double x) { return x * std::exp(-x * x); }};
  for (const auto& f : fs) {
    const auto s = SampledFunction::sample(f, 8.0, 1e-3);
    const auto r = green_apply(s);
    for (std::size_t i = 1; i + 1 < s.values.size(); ++i) {
      const double d = (r.u.values[i + 1] - r.u.values[i - 1]) / (2 * s.h);
      worst = std::max(worst, std::abs(d - s.values[i]));
    }
  }
  double obstruction = 0.0;
  bool rejected = false;
  try {
    green_apply(SampledFunction::sample([](double x) { return std::exp(-x * x); }, 8.0, 1e-3));
  } catch (const ObstructionError& e) {
    rejected = true;
    obstruction = e.value();
  }
  const bool value_ok = std::abs(obstruction - std::sqrt(pi)) <= 1e-8;
  return {worst <= kGreenTol && rejected && value_ok,
          fmt::format("sup residual {:.2e}, obstruction {:.10f}", worst, obstruction)};
}

Outcome diophantine() {
  const auto golden =
      ExactReal::parse("1.6180339887498948482045868343656381177203091798057628621354486227");
  const auto g = diophantine_exponent_estimate(golden, BigInt(1000000));
  // sum_{n<=4} 10^{-n^n}, exact.
  BigRational lv = 0;
  for (unsigned e : {1u, 4u, 27u, 256u})
    lv += BigRational(BigInt(1), boost::multiprecision::pow(BigInt(10), e));
  const auto l = diophantine_exponent_estimate(ExactReal::exact(lv), BigInt(1000000));
  const bool ok = !g.infinite && g.nu >= kNuGoldenLo && g.nu <= kNuGoldenHi &&
                  (l.infinite || l.nu > kNuLiouvilleMin);
  return {ok, fmt::format("golden {:.4f}, Liouville {:.4f}", g.nu, l.nu)};
}

Outcome algebra() {
  bool ok = true;
  for (int k = 2; k <= 6; ++k) {
    const auto eta = make_eta_filiform(k);
    const auto canon = make_filiform(k);
    ok = ok && change_basis(eta, vergne_from_eta(k), canon.names()).same_table(canon) &&
         eta.jacobi_residual() == Rational(0);
  }
  return {ok, "k=2..6 exact"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "gauss-sum", 1e-3, gauss_sum},
      {2, "closed-form", 5, closed_form},
      {3, "quadratic-slope", 60, quadratic_slope},
      {4, "cubic-bound", 120, cubic_bound},
      {5, "scaling-law", 10, scaling_law},
      {6, "quadrature", 1, quadrature},
      {7, "svp", 30, svp},
      {8, "golden-trajectory", 30, golden_trajectory},
      {9, "green-residual", 1, green},
      {10, "diophantine", 5, diophantine},
      {11, "algebra-recurrence", 1, algebra},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = out.ok && in_time;
    failed += !pass;
    fmt::print("{} {:>2} {:<19} {:>10.4f}s / {:g}s  {}{}\n", pass ? "PASS" : "FAIL", c.id, c.name,
               secs, c.budget_s, out.detail, in_time ? "" : "  (over budget)");
    std::fflush(stdout);
  }
  fmt::print("{}/{} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
             criteria.size());
  return failed == 0 ? 0 : 1;
}
