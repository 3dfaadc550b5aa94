// SPDX-License-Identifier: Apache-2.0
#include "filab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "filab/error.hpp"

namespace filab {

ScalingExponents optimal_rho(int k) {
  require(k >= 2, "k must be >= 2");
  std::vector<double> rho;
  for (int i = 1; i <= k; ++i) rho.push_back(2.0 * (k - i) / (k * (k - 1.0)));
  ScalingExponents out(std::move(rho));
  if (!out.admissible()) throw NumericalFailure("optimal exponents failed admissibility");
  return out;
}

Regime parse_regime(const std::string& s) {
  if (s == "strong") return Regime::strong;
  if (s == "log") return Regime::log;
  if (s == "sharp") return Regime::sharp;
  if (s == "weak") return Regime::weak;
  throw InvalidParameter("unknown regime: " + s);
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::strong: return "strong";
    case Regime::log: return "log";
    case Regime::sharp: return "sharp";
    case Regime::weak: return "weak";
  }
  return "?";
}

BoundExponent bound_exponent(int k, Regime regime, double nu0) {
  require(k >= 2, "k must be >= 2");
  BoundExponent b;
  b.power = 1.0 - 1.0 / (k * (k - 1.0));
  switch (regime) {
    case Regime::strong:
    case Regime::sharp:
      break;
    case Regime::log:
      b.log_power = 0.5;
      break;
    case Regime::weak:
      require(nu0 >= k - 1, "weak regime needs nu0 >= k-1");
      b.power = 1.0 - 1.0 / (2.0 * nu0 * (k - 1));
      break;
  }
  return b;
}

std::vector<std::uint64_t> dyadic_schedule(int lo, int hi) {
  require(lo >= 0 && hi >= lo && hi <= 62, "dyadic exponents must satisfy 0 <= lo <= hi <= 62");
  std::vector<std::uint64_t> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::uint64_t{1} << e);
  return out;
}

std::vector<double> seeded_point(int k, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> s;
  for (int i = 0; i < k; ++i) s.push_back(std::ldexp(static_cast<double>(gen() >> 11), -53));
  return s;
}

SweepTable dyadic_weyl_sweep(const SweepConfig& cfg) {
  for (std::size_t i = 1; i < cfg.schedule.size(); ++i)
    require(cfg.schedule[i] > cfg.schedule[i - 1], "N schedule must be strictly increasing");
  if (cfg.schedule.empty()) return {};
  if (cfg.poly) {
    const SectionData sd = monomial_to_section(*cfg.poly, cfg.mode);
    return weyl_sum_schedule(sd.sys, sd.s, cfg.ell, cfg.schedule, cfg.threads);
  }
  require(static_cast<int>(cfg.alpha.size()) == cfg.k, "alpha must have k entries");
  const SkewShiftSystem sys(cfg.alpha, cfg.mode);
  std::vector<double> s = cfg.s;
  if (s.empty()) s = cfg.seed ? seeded_point(cfg.k, *cfg.seed) : std::vector<double>(cfg.k, 0.0);
  require(static_cast<int>(s.size()) == cfg.k, "s must have k entries");
  return weyl_sum_schedule(sys, TorusPoint::from_doubles(s, cfg.mode), cfg.ell, cfg.schedule,
                           cfg.threads);
}

FitReport slope_fit(const SweepTable& table) {
  FitReport fit;
  std::vector<double> xs, ys;
  for (const auto& row : table) {
    const double a = std::abs(row.value);
    if (a == 0.0) {
      ++fit.rows_dropped;
      continue;
    }
    xs.push_back(std::log2(static_cast<double>(row.N)));
    ys.push_back(std::log2(a));
  }
  if (xs.size() < 3) throw InvalidParameter("slope fit needs at least 3 rows with |W| > 0");
  const auto n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  require(sxx > 0.0, "slope fit needs distinct N");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.rows_used = xs.size();
  return fit;
}

double envelope(std::uint64_t N, const BoundExponent& b, Regime regime, double eps) {
  const auto n = static_cast<double>(N);
  switch (regime) {
    case Regime::strong:
    case Regime::weak:
      return std::pow(n, b.power + eps);
    case Regime::log:
      return std::pow(n, b.power) * std::pow(1.0 + std::max(0.0, std::log(n)), b.log_power + eps);
    case Regime::sharp:
      return std::pow(n, b.power);
  }
  return 0.0;
}

FitReport bound_check(const SweepTable& table, int k, Regime regime, double nu0, double eps,
                      double envelope_constant) {
  require(envelope_constant > 0.0, "envelope constant must be positive");
  FitReport fit = slope_fit(table);
  fit.regime = regime;
  fit.bound = bound_exponent(k, regime, nu0);
  for (const auto& row : table) {
    const double r = std::abs(row.value) / (envelope_constant * envelope(row.N, fit.bound, regime, eps));
    fit.max_ratio = std::max(fit.max_ratio, r);
  }
  fit.verdict = fit.slope <= fit.bound.power + kVerdictEpsilon;
  return fit;
}

nlohmann::json fit_report_json(int k, const std::vector<double>& alpha, const FitReport& fit) {
  nlohmann::json j;
  j["k"] = k;
  j["alpha"] = alpha;
  j["regime"] = fit.regime ? to_string(*fit.regime) : "none";
  j["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2},
              {"rows_used", fit.rows_used}, {"rows_dropped", fit.rows_dropped}};
  if (fit.regime) {
    j["bound"] = {{"power", fit.bound.power}, {"log_power", fit.bound.log_power},
                  {"max_ratio", fit.max_ratio}, {"verdict", fit.verdict}};
  }
  return j;
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::string sweep_csv_header() { return "N,re,im,abs,log2_N,log2_abs"; }

std::string sweep_csv_row(const WeylPartial& row) {
  const double a = std::abs(row.value);
  return fmt::format("{},{},{},{},{},{}", row.N, format_number(row.value.real()),
                     format_number(row.value.imag()), format_number(a),
                     format_number(std::log2(static_cast<double>(row.N))),
                     format_number(std::log2(a)));
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string provenance_line(const std::string& schema, std::uint64_t config_hash) {
  return fmt::format("# filab {} schema={} config={:016x}", kVersion, schema, config_hash);
}

}  // namespace filab
