// SPDX-License-Identifier: Apache-2.0
// Circle arithmetic and the runtime-dispatched sum kernels.
#include <cmath>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "doctest.h"
#include "oracles/exact_phase.hpp"

#include "filab/circle.hpp"
#include "filab/dynamics.hpp"
#include "filab/error.hpp"
#include "filab/kernels.hpp"

using namespace filab;
using boost::multiprecision::cpp_rational;

namespace {

std::vector<kernels::Isa> simd_variants() {
  std::vector<kernels::Isa> out;
  for (auto isa : {kernels::Isa::avx2, kernels::Isa::neon})
    if (kernels::isa_available(isa)) out.push_back(isa);
  return out;
}

const kernels::KernelTable& table(kernels::Isa isa) {
  return isa == kernels::Isa::avx2 ? *kernels::avx2_table() : *kernels::neon_table();
}

// Lane tables built from oracle phases: lane L runs over n = L + 4m.
kernels::LaneTables oracle_lanes(const std::vector<std::uint64_t>& c) {
  const int k = static_cast<int>(c.size()) - 1;
  kernels::LaneTables t;
  t.order = k;
  t.d.assign(c.size() * kernels::kLanes, 0);
  for (std::size_t L = 0; L < kernels::kLanes; ++L) {
    std::vector<std::uint64_t> v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = oracle::fixed_phase(c, L + kernels::kLanes * i);
    for (int j = 1; j <= k; ++j)
      for (int i = k; i >= j; --i) v[static_cast<std::size_t>(i)] -= v[static_cast<std::size_t>(i - 1)];
    for (std::size_t j = 0; j < c.size(); ++j) t.d[j * kernels::kLanes + L] = v[j];
  }
  return t;
}

}  // namespace

TEST_CASE("double-double normalization") {
  const DD a = circle::normalize(2.75, 1e-20);
  CHECK(a.hi == 0.75);
  CHECK(a.lo == 1e-20);
  const DD b = circle::normalize(-0.25, 0.0);
  CHECK(b.hi == 0.75);
  const DD c = circle::normalize(1.0, -1e-30);
  CHECK(c.hi + c.lo < 1.0);
  CHECK(c.hi >= 0.0);
  CHECK(circle::distance(0.95, 0.05) == doctest::Approx(0.1));
}

TEST_CASE("exact products reduced mod 1") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int rep = 0; rep < 500; ++rep) {
    const double x = u(gen);
    const BigInt n = BigInt(gen() >> 3) * BigInt(gen() >> 40);
    const DD r = circle::frac_mul(n, x);
    cpp_rational exact = cpp_rational(n) * cpp_rational(x);
    const BigInt fl = numerator(exact) / denominator(exact) - (exact < 0 ? 1 : 0);
    exact -= fl;
    cpp_rational err = cpp_rational(r.hi) + cpp_rational(r.lo) - exact;
    if (err > cpp_rational(1, 2)) err -= 1;
    if (err < cpp_rational(-1, 2)) err += 1;
    CHECK(std::abs(err.convert_to<double>()) <= std::ldexp(1.0, -100));
  }
}

TEST_CASE("fixed-point fractions") {
  CHECK(circle::to_fixed(0.5) == (std::uint64_t{1} << 63));
  CHECK(circle::to_fixed(-0.25) == (std::uint64_t{3} << 62));
  CHECK(circle::fixed_from_ratio(1, 4) == (std::uint64_t{1} << 62));
  CHECK(circle::fixed_from_ratio(-1, 4) == (std::uint64_t{3} << 62));
  CHECK(circle::fixed_to_double(circle::to_fixed(0.3)) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(circle::fixed_to_turn(std::uint64_t{3} << 62) == -0.25);
  CHECK(circle::low64(BigInt(-1)) == ~std::uint64_t{0});
  CHECK(circle::binomial(10, 3) == 120);
  CHECK(circle::binomial(2, 5) == 0);
  CHECK(circle::binomial(1ULL << 40, 4) == oracle::binom(1ULL << 40, 4));
  CHECK(parse_arith("fixed64") == Arith::fixed64);
  CHECK_THROWS_AS(parse_arith("float32"), InvalidParameter);
}

TEST_CASE("scalar phase generator matches the exact oracle") {
  std::mt19937_64 gen(5);
  for (int k = 1; k <= 6; ++k) {
    std::vector<std::uint64_t> c(static_cast<std::size_t>(k) + 1);
    for (auto& x : c) x = gen();
    auto t = oracle_lanes(c);
    const std::size_t rows = 257;
    std::vector<std::uint64_t> out(rows * kernels::kLanes);
    kernels::scalar_table().fixed_phases(t, out.data(), rows);
    for (std::size_t n = 0; n < out.size(); ++n) REQUIRE(out[n] == oracle::fixed_phase(c, n));
  }
}

TEST_CASE("SIMD variants are equivalent to the scalar kernels") {
  const auto variants = simd_variants();
  if (variants.empty()) {
    MESSAGE("no SIMD variant available on this CPU; scalar only");
    return;
  }
  std::mt19937_64 gen(9);
  for (auto isa : variants) {
    const auto& kt = table(isa);
    INFO("isa = " << kernels::to_string(isa));
    for (int k = 0; k <= 7; ++k) {
      kernels::LaneTables a;
      a.order = k;
      a.d.resize(static_cast<std::size_t>(k + 1) * kernels::kLanes);
      for (auto& x : a.d) x = gen();
      kernels::LaneTables b = a;
      const std::size_t rows = 1000;
      std::vector<std::uint64_t> pa(rows * kernels::kLanes), pb(rows * kernels::kLanes);
      kernels::scalar_table().fixed_phases(a, pa.data(), rows);
      kt.fixed_phases(b, pb.data(), rows);
      CHECK(pa == pb);
      CHECK(a.d == b.d);

      std::vector<double> ta(pa.size()), tb(pa.size());
      kernels::scalar_table().fixed_to_turns(pa.data(), ta.data(), pa.size());
      kt.fixed_to_turns(pa.data(), tb.data(), pa.size());
      CHECK(ta == tb);

      for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{7}, ta.size()}) {
        kernels::ExpSum sa, sb;
        kernels::scalar_table().exp_sum(ta.data(), n, sa);
        kt.exp_sum(ta.data(), n, sb);
        const double tol = 1e-14 * static_cast<double>(n + 1);
        CHECK(std::abs(sa.re - sb.re) <= tol);
        CHECK(std::abs(sa.im - sb.im) <= tol);
      }
    }
    // Edge turns: +-1/2, 0, quadrant boundaries.
    const std::vector<double> edges{-0.5, -0.375, -0.25, -0.125, 0.0, 0.125, 0.25, 0.375, 0.4999999999999999};
    for (double e : edges) {
      kernels::ExpSum sa, sb;
      kernels::scalar_table().exp_sum(&e, 1, sa);
      kt.exp_sum(&e, 1, sb);
      CHECK(sa.re == doctest::Approx(sb.re).epsilon(1e-15).scale(1.0));
      CHECK(sa.im == doctest::Approx(sb.im).epsilon(1e-15).scale(1.0));
    }
  }
}

TEST_CASE("dispatch override") {
  CHECK(kernels::isa_available(kernels::Isa::scalar));
  kernels::force_isa(kernels::Isa::scalar);
  CHECK(kernels::active().isa == kernels::Isa::scalar);
  kernels::reset_isa();
  CHECK(kernels::parse_isa("avx2") == kernels::Isa::avx2);
  CHECK_THROWS_AS(kernels::parse_isa("sse9"), InvalidParameter);
  if (!kernels::isa_available(kernels::Isa::neon))
    CHECK_THROWS_AS(kernels::force_isa(kernels::Isa::neon), InvalidParameter);
}

TEST_CASE("Weyl sums agree across kernel variants") {
  const SkewShiftSystem sys({std::sqrt(2.0) - 1.0, 0.3, 0.7}, Arith::fixed64);
  const TorusPoint s = TorusPoint::from_doubles({0.1, 0.2, 0.3}, Arith::fixed64);
  kernels::force_isa(kernels::Isa::scalar);
  const auto ref = weyl_sum_skew(sys, s, 3, 100000).value;
  for (auto isa : simd_variants()) {
    kernels::force_isa(isa);
    const auto v = weyl_sum_skew(sys, s, 3, 100000).value;
    CHECK(std::abs(v - ref) <= 1e-9);
  }
  kernels::reset_isa();
}
