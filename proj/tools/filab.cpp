// SPDX-License-Identifier: Apache-2.0
// filab command-line tool.
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include <fmt/format.h>

#include "filab/algebra.hpp"
#include "filab/diophantine.hpp"
#include "filab/dynamics.hpp"
#include "filab/error.hpp"
#include "filab/harness.hpp"
#include "filab/kernels.hpp"
#include "filab/lattice.hpp"
#include "filab/representation.hpp"

namespace {

using namespace filab;
using nlohmann::json;

enum ExitCode { kOk = 0, kInvalid = 1, kNumerical = 2, kResource = 3 };

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

// Real-number expressions: literals (decimal or p/q), phi, pi, sqrt(.),
// + - * / and parentheses. Evaluated in 113-bit precision.
class RealParser {
 public:
  explicit RealParser(std::string text) : s_(std::move(text)) {}

  LatticeReal parse() {
    LatticeReal v = expr();
    skip();
    require(pos_ == s_.size(), "unexpected trailing input in '" + s_ + "'");
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  LatticeReal expr() {
    LatticeReal v = term();
    while (true) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  LatticeReal term() {
    LatticeReal v = unary();
    while (true) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        const LatticeReal d = unary();
        require(d != 0, "division by zero in '" + s_ + "'");
        v /= d;
      } else {
        return v;
      }
    }
  }
  LatticeReal unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }
  LatticeReal atom() {
    skip();
    if (eat('(')) {
      LatticeReal v = expr();
      require(eat(')'), "missing ')' in '" + s_ + "'");
      return v;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string word = s_.substr(start, pos_ - start);
    if (word == "phi") return (1 + sqrt(LatticeReal(5))) / 2;
    if (word == "pi") return boost::math::constants::pi<LatticeReal>();
    if (word == "sqrt") {
      require(eat('('), "sqrt needs '('");
      const LatticeReal v = expr();
      require(eat(')'), "missing ')' in '" + s_ + "'");
      require(v >= 0, "sqrt of a negative number");
      return sqrt(v);
    }
    require(word.empty(), "unknown name '" + word + "'");
    start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
            ((s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ > start) ||
            ((s_[pos_] == '-' || s_[pos_] == '+') && pos_ > start &&
             (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
      ++pos_;
    require(pos_ > start, "expected a number in '" + s_ + "'");
    const ExactReal r = ExactReal::parse(s_.substr(start, pos_ - start));
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    return LatticeReal(numerator(r.value)) / LatticeReal(denominator(r.value));
  }

  std::string s_;
  std::size_t pos_ = 0;
};

bool is_plain_literal(const std::string& s) {
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '/' || c == '-' ||
          c == '+' || c == 'e' || c == 'E'))
      return false;
  return !s.empty();
}

LatticeReal parse_real_quad(const std::string& s) { return RealParser(s).parse(); }

double parse_real(const std::string& s) { return parse_real_quad(s).convert_to<double>(); }

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) out.push_back(parse_real(item));
  return out;
}

std::vector<LatticeReal> parse_reals_quad(const std::string& s) {
  std::vector<LatticeReal> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_real_quad(item));
  return out;
}

std::vector<std::uint64_t> parse_counts(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(s, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      require(used == item.size(), "bad count '" + item + "'");
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw InvalidParameter("bad count '" + item + "'");
    }
  }
  return out;
}

ExactReal parse_exact(const std::string& s) {
  if (is_plain_literal(s)) return ExactReal::parse(s);
  const LatticeReal v = parse_real_quad(s);
  // Exact binary value of the 113-bit result with a few ulps of slack.
  int e = 0;
  const LatticeReal m = frexp(v, &e);
  const BigInt mant(static_cast<BigInt>(ldexp(m, 113)));
  BigRational value(mant);
  const int shift = e - 113;
  if (shift >= 0) value *= BigRational(BigInt(1) << shift);
  else value /= BigRational(BigInt(1) << -shift);
  BigRational radius = shift >= -2 ? BigRational(BigInt(1) << (shift + 2))
                                   : BigRational(BigInt(1), BigInt(1) << -(shift + 2));
  return {value, radius};
}

std::vector<double> grid(double t0, double t1, double dt) {
  require(dt > 0.0 && t1 >= t0, "grid needs dt > 0 and t1 >= t0");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((t1 - t0) / dt + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(t0 + static_cast<double>(i) * dt);
  return out;
}

// Shared output sink: a file when --out is given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidParameter("cannot open output file " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Common {
  std::string out;
  unsigned threads = 1;
  std::string isa = "auto";
  std::string mode = "fixed64";
};

// Section of the config file that feeds each subcommand.
const std::map<std::string, std::string> kSection = {
    {"weyl", "weyl"},          {"fit", "weyl"},        {"orbit", "weyl"},
    {"lattice-flow", "lattice"}, {"inj", "lattice"},  {"dist-norm", "rep"},
    {"scaling", "rep"},        {"green", "rep"},       {"cf", ""},
    {"algebra", ""},           {"rho", ""}};

std::vector<std::string> read_config(const std::string& path, const std::string& section) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot read config file " + path);
  std::vector<std::string> args;
  std::string line, current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      require(line.back() == ']', fmt::format("config line {}: malformed section", lineno));
      current = trim(line.substr(1, line.size() - 2));
      require(current == "weyl" || current == "lattice" || current == "rep",
              fmt::format("config line {}: unknown section [{}]", lineno, current));
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, fmt::format("config line {}: expected key = value", lineno));
    if (current != section || section.empty()) continue;
    args.push_back("--" + trim(line.substr(0, eq)));
    args.push_back(trim(line.substr(eq + 1)));
  }
  return args;
}

std::string joined(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    s += a;
    s.push_back('\x1f');
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  // Config-file values become ordinary arguments placed before the user's,
  // so explicit flags (last occurrence wins) override them.
  std::string config_path;
  std::size_t sub_pos = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    if (sub_pos == args.size() && kSection.count(args[i])) sub_pos = i;
  }
  try {
    if (!config_path.empty() && sub_pos < args.size()) {
      const auto extra = read_config(config_path, kSection.at(args[sub_pos]));
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, extra.begin(), extra.end());
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  const std::uint64_t config_hash = fnv1a(joined(args));

  CLI::App app{"filab: filiform nilflow numerical laboratory", "filab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("filab ") + kVersion);
  app.add_option("--config", config_path, "INI-style file with [weyl], [lattice], [rep] sections");

  Common common;
  auto add_common = [&](CLI::App* sub, bool sweep) {
    sub->add_option("--out", common.out, "Output file (default: stdout)");
    if (sweep) {
      sub->add_option("--threads", common.threads, "Worker threads for sums")->check(CLI::Range(1u, 256u));
      sub->add_option("--isa", common.isa, "Kernel variant: auto|scalar|avx2|neon");
      sub->add_option("--mode", common.mode, "Arithmetic: fixed64|float64");
    }
  };

  // weyl / fit / orbit
  int k = 2;
  std::string coeffs, alpha_s, s_s, n_s, rho_s, lambda_s;
  double constant = 0.0;
  std::int64_t ell = 1;
  int lo = 8, hi = 22;
  std::optional<std::uint64_t> seed;
  std::string regime = "strong";
  double nu0 = 0.0, eps = kVerdictEpsilon;
  std::uint64_t steps = 10;

  auto add_sweep = [&](CLI::App* sub) {
    sub->add_option("--k", k, "Degree / step");
    sub->add_option("--coeffs", coeffs, "Polynomial coefficients, highest degree first (k values)");
    sub->add_option("--constant", constant, "Constant term of the polynomial");
    sub->add_option("--alpha", alpha_s, "Skew-shift frequency vector (k values)");
    sub->add_option("--s", s_s, "Starting point on the torus (k values)");
    sub->add_option("--seed", seed, "Seed for a uniform starting point");
    sub->add_option("--ell", ell, "Nonzero frequency multiplier");
    sub->add_option("--n", n_s, "Comma-separated N values (overrides --lo/--hi)");
    sub->add_option("--lo", lo, "Smallest dyadic exponent");
    sub->add_option("--hi", hi, "Largest dyadic exponent");
    add_common(sub, true);
  };

  auto* weyl = app.add_subcommand("weyl", "Weyl sums along a dyadic schedule (CSV)");
  add_sweep(weyl);
  auto* fit = app.add_subcommand("fit", "Slope fit and bound check of a Weyl sweep (JSON)");
  add_sweep(fit);
  fit->add_option("--regime", regime, "strong|log|sharp|weak");
  fit->add_option("--nu0", nu0, "Diophantine exponent for the weak regime");
  fit->add_option("--eps", eps, "Epsilon in the envelope");

  auto* orbit = app.add_subcommand("orbit", "Skew-shift trajectory (CSV, turns)");
  orbit->add_option("--alpha", alpha_s, "Frequency vector")->required();
  orbit->add_option("--s", s_s, "Starting point");
  orbit->add_option("--steps", steps, "Number of steps");
  add_common(orbit, true);

  // lattice-flow / inj
  double t0 = 0.0, t1 = 25.0, dt = 0.25, t = 0.0;
  std::string basis_s, summary_path;
  std::uint64_t node_budget = kDefaultNodeBudget;
  auto* lflow = app.add_subcommand("lattice-flow", "Injectivity radius along the diagonal flow (CSV)");
  lflow->add_option("--alpha", alpha_s, "Frequency vector; expressions like (1+sqrt(5))/2 allowed")->required();
  lflow->add_option("--rho", rho_s, "Scaling exponents (default: optimal)");
  lflow->add_option("--t0", t0, "First time");
  lflow->add_option("--t1", t1, "Last time");
  lflow->add_option("--dt", dt, "Time step");
  lflow->add_option("--summary", summary_path, "Write the JSON summary here instead of a trailing comment");
  add_common(lflow, false);

  auto* inj = app.add_subcommand("inj", "Shortest vector and injectivity radius of one lattice (JSON)");
  inj->add_option("--alpha", alpha_s, "Frequency vector of an orbit lattice");
  inj->add_option("--rho", rho_s, "Scaling exponents (default: optimal)");
  inj->add_option("--t", t, "Flow time");
  inj->add_option("--basis", basis_s, "Generators, ';'-separated columns of ','-separated entries");
  inj->add_option("--node-budget", node_budget, "Enumeration node budget");
  add_common(inj, false);

  // dist-norm / scaling / green
  std::string poly_s, t_s = "0,2,4,6", f_name;
  double sigma = 1.0, tau = 0.0, L = 8.0, h = 2.5e-4;
  auto* dnorm = app.add_subcommand("dist-norm", "Invariant-distribution norm over a time grid (CSV)");
  dnorm->add_option("--lambda", lambda_s, "Linear form lambda_1..lambda_k");
  dnorm->add_option("--poly", poly_s, "Raw polynomial, highest degree first (JSON output)");
  dnorm->add_option("--sigma", sigma, "Sobolev order");
  dnorm->add_option("--rho", rho_s, "Scaling exponents (default: optimal)");
  dnorm->add_option("--t", t_s, "Comma-separated times");
  add_common(dnorm, false);

  auto* scaling = app.add_subcommand("scaling", "Fitted growth rate of the distribution norm (JSON)");
  scaling->add_option("--lambda", lambda_s, "Linear form")->required();
  scaling->add_option("--sigma", sigma, "Sobolev order");
  scaling->add_option("--rho", rho_s, "Scaling exponents (default: optimal)");
  scaling->add_option("--t", t_s, "Comma-separated times");
  add_common(scaling, false);

  auto* green = app.add_subcommand("green", "Green operator residual and norm bound (JSON)");
  green->set_help_flag("--help", "Print this help message and exit");  // -h is the grid step
  green->add_option("--f", f_name, "gaussian-derivative | x-gaussian | gaussian");
  green->add_option("--L", L, "Half-width of the sampling interval");
  green->add_option("--h", h, "Grid step");
  green->add_option("--lambda", lambda_s, "Linear form for the norm bound");
  green->add_option("--poly", poly_s, "Raw polynomial for the norm bound, highest degree first");
  green->add_option("--sigma", sigma, "Sobolev order");
  green->add_option("--tau", tau, "Numerator order");
  green->add_option("--rho", rho_s, "Scaling exponents (default: optimal)");
  green->add_option("--t", t, "Flow time");
  add_common(green, false);

  // cf / algebra / rho
  std::string x_s;
  int depth = 20;
  std::string qmax_s = "1000000";
  auto* cf = app.add_subcommand("cf", "Continued fraction and Diophantine exponent (JSON)");
  cf->add_option("--x", x_s, "Real number: p/q, decimal, or expression")->required();
  cf->add_option("--depth", depth, "Number of partial quotients");
  cf->add_option("--qmax", qmax_s, "Largest denominator for the exponent estimate");
  add_common(cf, false);

  std::string basis_kind = "canonical";
  auto* alg = app.add_subcommand("algebra", "Bracket table (JSON)");
  alg->add_option("--k", k, "Step");
  alg->add_option("--basis", basis_kind, "canonical|eta|quasi-abelian");
  add_common(alg, false);

  auto* rho_cmd = app.add_subcommand("rho", "Optimal scaling exponents");
  rho_cmd->add_option("--k", k, "Step")->required();
  add_common(rho_cmd, false);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kInvalid;
  }

  auto provenance_json = [&](const std::string& schema) {
    return json{{"tool", "filab"}, {"version", kVersion}, {"schema", schema},
                {"config", fmt::format("{:016x}", config_hash)}};
  };
  auto rho_or_optimal = [&](int kk) {
    if (rho_s.empty()) return optimal_rho(kk);
    return ScalingExponents(parse_reals(rho_s));
  };

  try {
    if (common.isa != "auto") kernels::force_isa(kernels::parse_isa(common.isa));
    const Arith mode = parse_arith(common.mode);
    Output out(common.out);
    std::ostream& os = out.os();

    auto sweep_config = [&]() {
      SweepConfig cfg;
      cfg.k = k;
      cfg.ell = ell;
      cfg.mode = mode;
      cfg.threads = common.threads;
      cfg.seed = seed;
      if (!coeffs.empty()) {
        MonomialPoly p{parse_reals(coeffs), constant};
        require(p.degree() == k, "--coeffs needs exactly k values");
        cfg.poly = p;
      } else {
        require(!alpha_s.empty(), "give --coeffs or --alpha");
        cfg.alpha = parse_reals(alpha_s);
        cfg.s = parse_reals(s_s);
      }
      cfg.schedule = n_s.empty() ? dyadic_schedule(lo, hi) : parse_counts(n_s);
      return cfg;
    };

    if (weyl->parsed()) {
      const SweepConfig cfg = sweep_config();
      const SweepTable table = dyadic_weyl_sweep(cfg);
      os << provenance_line("weyl-sweep/1", config_hash) << "\n" << sweep_csv_header() << "\n";
      for (const auto& row : table) os << sweep_csv_row(row) << "\n";
    } else if (fit->parsed()) {
      const SweepConfig cfg = sweep_config();
      const SweepTable table = dyadic_weyl_sweep(cfg);
      const FitReport rep = bound_check(table, k, parse_regime(regime), nu0, eps);
      std::vector<double> alpha = cfg.alpha;
      if (cfg.poly) alpha = monomial_to_section(*cfg.poly, Arith::float64).sys.alpha().to_doubles();
      json j = fit_report_json(k, alpha, rep);
      j["provenance"] = provenance_json("fit-report/1");
      os << j.dump(2) << "\n";
    } else if (orbit->parsed()) {
      const auto alpha = parse_reals(alpha_s);
      std::vector<double> s0 = parse_reals(s_s);
      if (s0.empty()) s0.assign(alpha.size(), 0.0);
      require(s0.size() == alpha.size(), "--s must match --alpha in length");
      const SkewShiftSystem sys(alpha, mode);
      TorusPoint p = TorusPoint::from_doubles(s0, mode);
      os << provenance_line("orbit/1", config_hash) << "\nn";
      for (std::size_t i = 1; i <= alpha.size(); ++i) os << ",s" << i;
      os << "\n";
      for (std::uint64_t n = 0; n <= steps; ++n) {
        os << n;
        for (double v : p.to_doubles()) os << "," << format_number(v);
        os << "\n";
        if (n < steps) p = step(sys, p);
      }
    } else if (lflow->parsed()) {
      const auto alpha = parse_reals_quad(alpha_s);
      const ScalingExponents rho = rho_or_optimal(static_cast<int>(alpha.size()));
      const auto ts = grid(t0, t1, dt);
      const InjTrajectory tr = inj_trajectory(alpha, rho, ts);
      os << provenance_line("lattice-flow/1", config_hash) << "\nt,inj,log_inj\n";
      for (std::size_t i = 0; i < ts.size(); ++i)
        os << format_number(ts[i]) << "," << format_number(tr.inj[i]) << ","
           << format_number(std::log(tr.inj[i])) << "\n";
      json summary{{"delta_hat", tr.delta_hat}, {"C", tr.C},
                   {"grid", {{"t0", t0}, {"t1", t1}, {"dt", dt}, {"points", ts.size()}}},
                   {"rho", rho.values()},
                   {"provenance", provenance_json("lattice-flow-summary/1")}};
      if (summary_path.empty()) {
        os << "# summary " << summary.dump() << "\n";
      } else {
        std::ofstream sf(summary_path);
        if (!sf) throw InvalidParameter("cannot open summary file " + summary_path);
        sf << summary.dump(2) << "\n";
      }
    } else if (inj->parsed()) {
      LatticeBasis basis;
      if (!basis_s.empty()) {
        const auto cols = split(basis_s, ';');
        const auto n = static_cast<Eigen::Index>(cols.size());
        basis.columns = RealMatrix::Zero(n, n);
        for (Eigen::Index c = 0; c < n; ++c) {
          const auto v = parse_reals_quad(cols[static_cast<std::size_t>(c)]);
          require(static_cast<Eigen::Index>(v.size()) == n, "basis must be square");
          for (Eigen::Index r = 0; r < n; ++r) basis.columns(r, c) = v[static_cast<std::size_t>(r)];
        }
      } else {
        require(!alpha_s.empty(), "give --basis or --alpha");
        const auto alpha = parse_reals_quad(alpha_s);
        basis = alpha_lattice_basis(alpha, rho_or_optimal(static_cast<int>(alpha.size())), t);
      }
      const ShortestVector sv = shortest_vector(basis, node_budget);
      std::vector<double> v(sv.vector.data(), sv.vector.data() + sv.vector.size());
      std::vector<long long> c(sv.coefficients.data(), sv.coefficients.data() + sv.coefficients.size());
      json j{{"inj", sv.length / 2}, {"systole", sv.length}, {"vector", v},
             {"coefficients", c},    {"nodes", sv.nodes},
             {"provenance", provenance_json("inj/1")}};
      os << j.dump(2) << "\n";
    } else if (dnorm->parsed()) {
      if (!poly_s.empty()) {
        auto desc = parse_reals(poly_s);
        Polynomial P{std::vector<double>(desc.rbegin(), desc.rend())};
        json j{{"sigma", sigma}, {"norm", dist_norm(P, sigma)},
               {"provenance", provenance_json("dist-norm-poly/1")}};
        os << j.dump(2) << "\n";
      } else {
        const RepForm form(parse_reals(lambda_s));
        const ScalingExponents rho = rho_or_optimal(form.k());
        const double base = dist_norm(form, sigma);
        os << provenance_line("dist-norm/1", config_hash) << "\nt,sigma,norm,rate_fit\n";
        for (double tt : parse_reals(t_s)) {
          const double v = dist_norm(form, sigma, Rescaling{tt, rho});
          const double rate = tt == 0.0 ? 0.0 : std::log(v / base) / tt;
          os << format_number(tt) << "," << format_number(sigma) << "," << format_number(v) << ","
             << format_number(rate) << "\n";
        }
      }
    } else if (scaling->parsed()) {
      const RepForm form(parse_reals(lambda_s));
      const ScalingExponents rho = rho_or_optimal(form.k());
      const ScalingFit fitr = scaling_check(form, sigma, rho, parse_reals(t_s));
      json j{{"rate", fitr.rate}, {"lower_bound", fitr.lower_bound},
             {"meets_lower_bound", fitr.meets_lower_bound}, {"t", fitr.t}, {"norms", fitr.norms},
             {"provenance", provenance_json("scaling/1")}};
      os << j.dump(2) << "\n";
    } else if (green->parsed()) {
      json j{{"provenance", provenance_json("green/1")}};
      if (!f_name.empty()) {
        std::function<double(double)> f;
        if (f_name == "gaussian-derivative") f = [](double x) { return -2 * x * std::exp(-x * x); };
        else if (f_name == "x-gaussian") f = [](double x) { return x * std::exp(-x * x); };
        else if (f_name == "gaussian") f = [](double x) { return std::exp(-x * x); };
        else throw InvalidParameter("unknown test function " + f_name);
        const auto fs = SampledFunction::sample(f, L, h);
        try {
          const GreenResult r = green_apply(fs);
          double residual = 0.0;
          for (std::size_t i = 1; i + 1 < fs.values.size(); ++i) {
            const double d = (r.u.values[i + 1] - r.u.values[i - 1]) / (2 * fs.h);
            residual = std::max(residual, std::abs(d - fs.values[i]));
          }
          j["mean"] = r.mean;
          j["residual"] = residual;
          j["one_sided_discrepancy"] = r.max_discrepancy;
        } catch (const ObstructionError& e) {
          std::cerr << "error: " << e.what() << " (D(f) = " << format_number(e.value()) << ")\n";
          return kInvalid;
        }
      }
      if (!lambda_s.empty()) {
        const RepForm form(parse_reals(lambda_s));
        Rescaling sc;
        if (t != 0.0) sc = Rescaling{t, rho_or_optimal(form.k())};
        j["norm_bound"] = green_norm_bound(form, sigma, tau, sc);
      } else if (!poly_s.empty()) {
        auto desc = parse_reals(poly_s);
        j["norm_bound"] = green_norm_bound(Polynomial{std::vector<double>(desc.rbegin(), desc.rend())}, sigma, tau);
      }
      require(j.size() > 1, "give --f, --lambda or --poly");
      os << j.dump(2) << "\n";
    } else if (cf->parsed()) {
      const ExactReal x = parse_exact(x_s);
      const ContinuedFraction c = continued_fraction(x, depth);
      json quotients = json::array(), convergents = json::array();
      auto big = [](const BigInt& v) -> json {
        if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
          return v.convert_to<std::int64_t>();
        return v.str();
      };
      for (const auto& a : c.quotients) quotients.push_back(big(a));
      for (const auto& [p, q] : c.convergents) convergents.push_back(json::array({big(p), big(q)}));
      json j{{"x", x_s}, {"quotients", quotients}, {"convergents", convergents},
             {"rational", c.rational}, {"precision_limited", c.precision_limited}};
      try {
        const NuEstimate nu = diophantine_exponent_estimate(x, BigInt(qmax_s));
        j["nu_hat"] = nu.infinite ? json("inf") : json(nu.nu);
        j["nu_argmax_q"] = big(nu.argmax_q);
      } catch (const InvalidParameter& e) {
        j["nu_hat"] = nullptr;
        j["nu_note"] = e.what();
      }
      j["provenance"] = provenance_json("cf/1");
      os << j.dump(2) << "\n";
    } else if (alg->parsed()) {
      json j;
      if (basis_kind == "canonical") j = make_filiform(k).to_json();
      else if (basis_kind == "eta") j = make_eta_filiform(k).to_json();
      else if (basis_kind == "quasi-abelian") j = make_quasi_abelian(k).algebra.to_json();
      else throw InvalidParameter("unknown basis " + basis_kind);
      j["provenance"] = provenance_json("algebra/1");
      os << j.dump(2) << "\n";
    } else if (rho_cmd->parsed()) {
      require(k >= 2, "k must be >= 2");
      std::string line;
      for (int i = 1; i <= k; ++i) {
        if (i > 1) line += ",";
        line += to_string(Rational(2 * (k - i), k * (k - 1)));
      }
      os << line << "\n";
    }
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const NoSolution& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ObstructionError& e) {
    std::cerr << "error: " << e.what() << " (value " << format_number(e.value()) << ")\n";
    return kInvalid;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const ResourceExceeded& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}
