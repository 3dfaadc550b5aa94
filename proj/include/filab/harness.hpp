// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "filab/dynamics.hpp"
#include "filab/scaling.hpp"

namespace filab {

inline constexpr const char* kVersion = "0.1.0";

// rho_i = 2(k-i) / (k(k-1)).
ScalingExponents optimal_rho(int k);

enum class Regime { strong, log, sharp, weak };

Regime parse_regime(const std::string& s);
std::string to_string(Regime r);

struct BoundExponent {
  double power = 0.0;      // exponent of N, without epsilon
  double log_power = 0.0;  // exponent of (1 + log N), without epsilon
};

// strong: 1 - 1/(k(k-1)); log: same power with (1 + log N)^{1/2};
// sharp: 1 - 1/(k(k-1)) without epsilon; weak: 1 - 1/(2 nu0 (k-1)), nu0 >= k-1.
BoundExponent bound_exponent(int k, Regime regime, double nu0 = 0.0);

inline constexpr double kVerdictEpsilon = 0.05;

struct SweepConfig {
  int k = 2;
  // Either a monomial polynomial or skew-shift data (alpha, s).
  std::optional<MonomialPoly> poly;
  std::vector<double> alpha;
  std::vector<double> s;  // empty: zero, or uniform from `seed` when set
  std::optional<std::uint64_t> seed;
  std::int64_t ell = 1;
  std::vector<std::uint64_t> schedule;
  Arith mode = Arith::fixed64;
  unsigned threads = 1;
};

// 2^lo, 2^{lo+1}, ..., 2^hi.
std::vector<std::uint64_t> dyadic_schedule(int lo, int hi);

// Uniform point of T^k from a 64-bit seed (mt19937_64, 53-bit doubles).
std::vector<double> seeded_point(int k, std::uint64_t seed);

using SweepTable = std::vector<WeylPartial>;

SweepTable dyadic_weyl_sweep(const SweepConfig& cfg);

struct FitReport {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t rows_used = 0;
  std::size_t rows_dropped = 0;  // |W| == 0
  // Filled by bound_check.
  std::optional<Regime> regime;
  BoundExponent bound;
  double max_ratio = 0.0;
  bool verdict = false;
};

// Least squares of log2|W| against log2 N.
FitReport slope_fit(const SweepTable& table);

// max |W_N| / (C * envelope(N)); verdict = slope <= power + 0.05.
FitReport bound_check(const SweepTable& table, int k, Regime regime, double nu0 = 0.0,
                      double eps = kVerdictEpsilon, double envelope_constant = 1.0);

double envelope(std::uint64_t N, const BoundExponent& b, Regime regime, double eps);

// {"k","alpha","regime","fit":{...},"bound":{...}}.
nlohmann::json fit_report_json(int k, const std::vector<double>& alpha, const FitReport& fit);

// Output helpers shared by the command-line tool.
std::string format_number(double v);  // 17 significant digits
std::string sweep_csv_header();
std::string sweep_csv_row(const WeylPartial& row);
std::uint64_t fnv1a(std::string_view data);
// "# filab <version> schema=<schema> config=<16 hex digits>"
std::string provenance_line(const std::string& schema, std::uint64_t config_hash);

}  // namespace filab
