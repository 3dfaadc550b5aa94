// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

#include "filab/dynamics.hpp"
#include "filab/harness.hpp"
#include "filab/lattice.hpp"

using namespace filab;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Run run(const std::string& args) {
  const std::string cmd = std::string(FILAB_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<double> csv_fields(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(std::stod(f));
  return out;
}

}  // namespace

TEST_CASE("weyl subcommand") {
  const auto r = run("weyl --k 2 --coeffs 0.2,0 --ell 1 --n 5");
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0].starts_with("# filab "));
  CHECK(ls[0].find("schema=weyl-sweep") != std::string::npos);
  CHECK(ls[1] == sweep_csv_header());
  const auto row = csv_fields(ls[2]);
  CHECK(row[0] == 5);
  CHECK(std::abs(row[3] - std::sqrt(5.0)) <= 1e-10);

  // Same numbers as the library.
  SweepConfig cfg;
  cfg.k = 3;
  cfg.alpha = {0.4142135623730951, 0.0, 0.0};
  cfg.seed = 1;
  cfg.schedule = dyadic_schedule(6, 10);
  const auto table = dyadic_weyl_sweep(cfg);
  const auto out = lines(run("weyl --k 3 --alpha 0.4142135623730951,0,0 --seed 1 --lo 6 --hi 10").out);
  REQUIRE(out.size() == table.size() + 2);
  for (std::size_t i = 0; i < table.size(); ++i) CHECK(out[i + 2] == sweep_csv_row(table[i]));
}

TEST_CASE("fixed and float modes agree on the Gauss sum") {
  for (const char* mode : {"fixed64", "float64"}) {
    const auto r = run(std::string("weyl --k 2 --coeffs 0.2,0 --n 5 --mode ") + mode);
    REQUIRE(r.code == 0);
    CHECK(std::abs(csv_fields(lines(r.out)[2])[3] - std::sqrt(5.0)) <= 1e-10);
  }
}

TEST_CASE("rho and cf subcommands") {
  const auto r = run("rho --k 3");
  CHECK(r.code == 0);
  CHECK(r.out == "2/3,1/3,0\n");
  const auto c = run("cf --x 1.6180339887 --depth 10");
  REQUIRE(c.code == 0);
  const auto j = nlohmann::json::parse(c.out);
  REQUIRE(j["quotients"].size() == 10);
  for (const auto& q : j["quotients"]) CHECK(q == 1);
  CHECK(j["provenance"]["schema"].get<std::string>().starts_with("cf"));
}

TEST_CASE("inj matches the library") {
  const auto r = run("inj --basis \"2,0;0,0.5\"");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  Eigen::MatrixXd b(2, 2);
  b << 2, 0, 0, 0.5;
  CHECK(j["inj"].get<double>() == doctest::Approx(injectivity_radius(LatticeBasis::from_double(b))));
  CHECK(j["inj"].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("exit codes") {
  CHECK(run("weyl --k 2 --coeffs 0.2,0 --n 5 --bogus").code == 1);
  CHECK(run("rho --k 1").code == 1);
  CHECK(run("dist-norm --poly 1,0,0 --sigma 0.2").code == 1);
  const auto g = run("green --f gaussian");
  CHECK(g.code == 1);
  CHECK(run("inj --basis \"0,0;0,0\"").code == 2);
  const auto budget = run("inj --alpha 0.6180339887,0 --t 12 --node-budget 1");
  CHECK(budget.code == 3);
  CHECK(budget.out.find("best") != std::string::npos);
  CHECK(run("nosuchcommand").code == 1);
}

TEST_CASE("config file with command-line override") {
  const auto path = std::filesystem::temp_directory_path() / "filab_test_config.ini";
  {
    std::ofstream f(path);
    f << "[weyl]\nn = 7\nell = 2\n";
  }
  const auto from_file = lines(run("--config " + path.string() + " weyl --k 2 --coeffs 0.2,0").out);
  REQUIRE(from_file.size() == 3);
  CHECK(csv_fields(from_file[2])[0] == 7);
  const auto overridden = lines(run("--config " + path.string() + " weyl --k 2 --coeffs 0.2,0 --n 5").out);
  REQUIRE(overridden.size() == 3);
  CHECK(csv_fields(overridden[2])[0] == 5);
  // ell = 2 still comes from the file: sum e(0.4 n^2) over n < 5 has |W| = sqrt 5.
  CHECK(std::abs(csv_fields(overridden[2])[3] - std::sqrt(5.0)) <= 1e-10);
  // Different effective configuration, different hash.
  CHECK(from_file[0] != overridden[0]);
  std::filesystem::remove(path);
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "filab_test_out.csv";
  CHECK(run("weyl --k 2 --coeffs 0.2,0 --n 5 --out " + path.string()).code == 0);
  std::ifstream f(path);
  std::string first;
  std::getline(f, first);
  CHECK(first.starts_with("# filab "));
  std::filesystem::remove(path);
}
