// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"

#include "filab/algebra.hpp"
#include "filab/error.hpp"

using namespace filab;

namespace {

RVec unit(std::size_t n, std::size_t i) {
  RVec v(n, Rational(0));
  v[i] = 1;
  return v;
}

RMat mat_mul(const RMat& a, const RMat& b) {
  const std::size_t n = a.size();
  RMat c(n, RVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

}  // namespace

TEST_CASE("filiform bracket table") {
  const auto alg = make_filiform(2);
  CHECK(alg.dim() == 3);
  CHECK(alg.bracket_basis(0, 1) == unit(3, 2));
  CHECK(alg.bracket_basis(0, 2) == RVec(3, Rational(0)));
  CHECK(alg.bracket_basis(1, 2) == RVec(3, Rational(0)));
  CHECK(make_filiform(5).dim() == 6);
  for (int k = 2; k <= 8; ++k) {
    const auto a = make_filiform(k);
    CHECK(a.jacobi_residual() == Rational(0));
    for (int i = 1; i < k; ++i) CHECK(a.bracket_basis(0, i) == unit(a.dim(), i + 1));
    CHECK(a.bracket_basis(0, k) == RVec(a.dim(), Rational(0)));
    CHECK(a.bracket_basis(static_cast<std::size_t>(k), 0) == RVec(a.dim(), Rational(0)));
  }
  CHECK_THROWS_AS(make_filiform(1), InvalidParameter);
}

TEST_CASE("json export") {
  const auto j = make_filiform(3).to_json();
  CHECK(j["k"] == 3);
  CHECK(j["brackets"][0]["lhs"] == "X");
  CHECK(j["brackets"][0]["rhs"] == "Y1");
  CHECK(j["brackets"][0]["out"]["Y2"] == 1);
  CHECK(j["brackets"].size() == 2);
}

TEST_CASE("theta coefficients") {
  CHECK(theta_coeff(1) == Rational(1));
  CHECK(theta_coeff(2) == Rational(-1, 2));
  CHECK(theta_coeff(3) == Rational(1, 3));
  CHECK_THROWS_AS(theta_coeff(0), InvalidParameter);
}

TEST_CASE("basis change recurrence") {
  const RMat s3 = vergne_from_eta(3);
  CHECK(s3 == RMat{{1, 0, 0}, {0, 1, Rational(-1, 2)}, {0, 0, 1}});
  CHECK(vergne_from_eta(2) == RMat{{1, 0}, {0, 1}});

  for (int k = 2; k <= 8; ++k) {
    const RMat S = vergne_from_eta(k);
    const auto K = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < K; ++i) {
      CHECK(S[i][i] == Rational(1));
      for (std::size_t j = 0; j < i; ++j) CHECK(S[i][j] == Rational(0));
    }
    // Row i+1 of S is ad_xi^i eta_1, computed here by nested brackets.
    const auto eta = make_eta_filiform(k);
    RVec v = unit(K + 1, 1);
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < K; ++j) CHECK(S[i][j] == v[j + 1]);
      CHECK(v[0] == Rational(0));
      v = eta.bracket(unit(K + 1, 0), v);
    }
    // The rows conjugate the eta table to the canonical table.
    auto names = make_filiform(k).names();
    const auto changed = change_basis(eta, S, names);
    CHECK(changed.same_table(make_filiform(k)));
    CHECK(eta.jacobi_residual() == Rational(0));
  }
}

TEST_CASE("adjoint action") {
  const auto alg = make_filiform(3);
  const auto y1 = ad_exp(alg, 1.0, {1.0, 0.0, 0.0});
  CHECK(y1[0] == doctest::Approx(1.0));
  CHECK(y1[1] == doctest::Approx(1.0));
  CHECK(y1[2] == doctest::Approx(0.5));
  const std::vector<double> v{0.3, -1.2, 2.5};
  CHECK(ad_exp(alg, 0.0, v) == v);
  CHECK_THROWS_AS(ad_exp(alg, 1.0, {1.0, 2.0}), InvalidParameter);

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 2; k <= 6; ++k) {
    const auto a = make_filiform(k);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> w(static_cast<std::size_t>(k));
      for (auto& x : w) x = u(gen);
      const double t = u(gen), s = u(gen);
      const auto lhs = ad_exp(a, t, ad_exp(a, s, w));
      const auto rhs = ad_exp(a, t + s, w);
      for (std::size_t i = 0; i < w.size(); ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("adjoint action is unipotent") {
  for (int k = 2; k <= 8; ++k) {
    const auto K = static_cast<std::size_t>(k);
    RMat A = ad_exp_matrix(k, Rational(7, 3));
    for (std::size_t i = 0; i < K; ++i) A[i][i] -= 1;
    RMat P = A;
    for (int p = 1; p < k; ++p) P = mat_mul(P, A);
    for (const auto& row : P)
      for (const auto& x : row) CHECK(x == Rational(0));
  }
}

TEST_CASE("one-parameter automorphism group") {
  const std::vector<double> s{0.25, 0.5, 0.125, 0.75};
  const auto h1 = h_auto(4, 1.0, s);
  CHECK(h1[0] == doctest::Approx(0.25));
  CHECK(h1[1] == doctest::Approx(0.75));
  CHECK(h1[2] == doctest::Approx(0.625));
  CHECK(h1[3] == doctest::Approx(0.875));
  CHECK(h_auto(4, 0.0, s) == s);
  const auto h2 = h_auto(2, 2.0, {0.3, 0.1});
  CHECK(h2[0] == doctest::Approx(0.3));
  CHECK(h2[1] == doctest::Approx(0.7));
  CHECK(gen_binomial(0.5, 2) == doctest::Approx(-0.125));

  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const double t = u(gen), w = u(gen);
    std::vector<double> x(5);
    for (auto& c : x) c = u(gen);
    const auto a = h_auto(5, t + w, x);
    const auto b = h_auto(5, t, h_auto(5, w, x));
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("quasi-abelian cover") {
  const auto q3 = make_quasi_abelian(3);
  CHECK(q3.index_set.size() == 6);
  CHECK(q3.algebra.dim() == 7);
  CHECK(make_quasi_abelian(2).index_set.size() == 3);
  for (int k = 2; k <= 6; ++k) {
    const auto q = make_quasi_abelian(k);
    CHECK(q.index_set.size() == static_cast<std::size_t>(k * (k + 1) / 2));
    CHECK(q.algebra.jacobi_residual() == Rational(0));
    CHECK(q.quotient_is_filiform());
    const std::size_t n = q.algebra.dim();
    for (const auto& [i, j] : q.index_set) {
      const auto p = static_cast<std::size_t>(q.position(i, j));
      const RVec b = q.algebra.bracket_basis(0, p);
      if (i + j < k + 1)
        CHECK(b == unit(n, static_cast<std::size_t>(q.position(i + 1, j))));
      else
        CHECK(b == RVec(n, Rational(0)));
      for (const auto& [i2, j2] : q.index_set)
        CHECK(q.algebra.bracket_basis(p, static_cast<std::size_t>(q.position(i2, j2))) ==
              RVec(n, Rational(0)));
    }
    for (const auto& v : q.ideal_basis) CHECK(q.project(v) == RVec(static_cast<std::size_t>(k) + 1, Rational(0)));
  }
  CHECK(q3.position(3, 2) == -1);
  CHECK_THROWS_AS(make_quasi_abelian(1), InvalidParameter);
}

TEST_CASE("conjugating element") {
  const auto alg = make_filiform(3);
  const RVec a{Rational(1, 3), Rational(1, 5), Rational(2, 7)};
  CHECK(conjugating_element(alg, a, a) == RVec(3, Rational(0)));

  const RVec b{Rational(1, 3), Rational(-4, 5), Rational(1, 11)};
  const RVec y = conjugating_element(alg, a, b);
  // alpha - beta = (0, c2, c3) gives Y = -(c2 Y1 + c3 Y2).
  CHECK(y == RVec{-(a[1] - b[1]), -(a[2] - b[2]), Rational(0)});

  for (int k = 2; k <= 6; ++k) {
    const auto f = make_filiform(k);
    const auto K = static_cast<std::size_t>(k);
    RVec al(K), be(K);
    for (std::size_t i = 0; i < K; ++i) {
      al[i] = Rational(static_cast<long>(i * 3 + 1), 7);
      be[i] = i == 0 ? al[0] : Rational(static_cast<long>(5 - 2 * i), 9);
    }
    const RVec yk = conjugating_element(f, al, be);
    CHECK(yk[K - 1] == Rational(0));
    RVec full(K + 1, Rational(0));
    for (std::size_t i = 0; i < K; ++i) full[i + 1] = yk[i];
    const RVec adx = f.bracket(unit(K + 1, 0), full);
    // ad_X(Y) = X_beta - X_alpha exactly.
    for (std::size_t i = 0; i < K; ++i) CHECK(adx[i + 1] == be[i] - al[i]);
  }
  CHECK_THROWS_AS(conjugating_element(alg, a, RVec{Rational(1, 2), 0, 0}), NoSolution);
}
