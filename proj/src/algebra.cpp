// SPDX-License-Identifier: Apache-2.0
#include "filab/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "filab/error.hpp"

namespace filab {

namespace {

RVec zeros(std::size_t n) { return RVec(n, Rational(0)); }

Rational rabs(const Rational& r) { return r < 0 ? -r : r; }

std::vector<std::string> filiform_names(int k, const char* gen,
                                        const char* ideal) {
  std::vector<std::string> names{gen};
  for (int i = 1; i <= k; ++i) names.push_back(ideal + std::to_string(i));
  return names;
}

// Solves A y = d exactly; free variables are set to zero.
RVec solve_exact(RMat A, RVec d) {
  const std::size_t rows = A.size();
  const std::size_t cols = rows ? A[0].size() : 0;
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && A[p][c].numerator() == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[r]);
    std::swap(d[p], d[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c].numerator() == 0) continue;
      const Rational f = A[i][c] / A[r][c];
      for (std::size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
      d[i] -= f * d[r];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (d[i].numerator() != 0) throw NoSolution("linear system is inconsistent");
  RVec y = zeros(cols);
  for (std::size_t i = 0; i < r; ++i) {
    const auto c = static_cast<std::size_t>(pivot_col[i]);
    y[c] = d[i] / A[i][c];
  }
  return y;
}

// Matrix of ad_X on the ideal: column i holds [X, Y_i] over (Y_1..Y_k).
RMat ad_x_matrix(const LieAlgebra& alg) {
  const std::size_t k = alg.dim() - 1;
  RMat A(k, zeros(k));
  for (std::size_t i = 0; i < k; ++i) {
    const RVec& b = alg.bracket_basis(0, i + 1);
    if (b[0].numerator() != 0) throw InvalidParameter("ideal is not ad_X invariant");
    for (std::size_t r = 0; r < k; ++r) A[r][i] = b[r + 1];
  }
  return A;
}

}  // namespace

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

LieAlgebra::LieAlgebra(int k, std::vector<std::string> names)
    : k_(k), names_(std::move(names)) {
  const std::size_t n = names_.size();
  table_.assign(n * n, zeros(n));
}

const RVec& LieAlgebra::bracket_basis(std::size_t i, std::size_t j) const {
  if (i >= dim() || j >= dim()) throw InvalidParameter("basis index out of range");
  return table_[i * dim() + j];
}

void LieAlgebra::set_bracket(std::size_t i, std::size_t j, const RVec& v) {
  if (v.size() != dim()) throw InvalidParameter("bracket vector has wrong size");
  table_[i * dim() + j] = v;
  RVec neg = v;
  for (auto& c : neg) c = -c;
  table_[j * dim() + i] = neg;
}

RVec LieAlgebra::bracket(const RVec& u, const RVec& v) const {
  const std::size_t n = dim();
  if (u.size() != n || v.size() != n)
    throw InvalidParameter("vector dimension mismatch");
  RVec out = zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i].numerator() == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j].numerator() == 0) continue;
      const RVec& b = table_[i * n + j];
      const Rational c = u[i] * v[j];
      for (std::size_t m = 0; m < n; ++m)
        if (b[m].numerator() != 0) out[m] += c * b[m];
    }
  }
  return out;
}

Rational LieAlgebra::jacobi_residual() const {
  const std::size_t n = dim();
  Rational worst(0);
  auto unit = [n](std::size_t i) {
    RVec e = zeros(n);
    e[i] = 1;
    return e;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const RVec ea = unit(a), eb = unit(b), ec = unit(c);
        RVec s = bracket(ea, bracket(eb, ec));
        const RVec t = bracket(eb, bracket(ec, ea));
        const RVec u = bracket(ec, bracket(ea, eb));
        for (std::size_t m = 0; m < n; ++m)
          worst = std::max(worst, rabs(s[m] + t[m] + u[m]));
      }
  return worst;
}

bool LieAlgebra::same_table(const LieAlgebra& other) const {
  return dim() == other.dim() && table_ == other.table_;
}

nlohmann::json LieAlgebra::to_json() const {
  nlohmann::json brackets = nlohmann::json::array();
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i + 1; j < dim(); ++j) {
      const RVec& b = bracket_basis(i, j);
      nlohmann::json out = nlohmann::json::object();
      for (std::size_t m = 0; m < dim(); ++m) {
        if (b[m].numerator() == 0) continue;
        if (b[m].denominator() == 1)
          out[names_[m]] = b[m].numerator();
        else
          out[names_[m]] = to_string(b[m]);
      }
      if (out.empty()) continue;
      brackets.push_back({{"lhs", names_[i]}, {"rhs", names_[j]}, {"out", out}});
    }
  return {{"k", k_}, {"basis", names_}, {"brackets", brackets}};
}

FiliformAlgebra make_filiform(int k) {
  require(k >= 2, "filiform step k must be >= 2");
  LieAlgebra alg(k, filiform_names(k, "X", "Y"));
  for (int i = 1; i < k; ++i) {
    RVec v = zeros(alg.dim());
    v[i + 1] = 1;
    alg.set_bracket(0, i, v);
  }
  return alg;
}

Rational theta_coeff(int m) {
  require(m >= 1, "theta_coeff needs m >= 1");
  return Rational(m % 2 == 1 ? 1 : -1, m);
}

FiliformAlgebra make_eta_filiform(int k) {
  require(k >= 2, "filiform step k must be >= 2");
  LieAlgebra alg(k, filiform_names(k, "xi", "eta"));
  for (int i = 1; i <= k; ++i) {
    RVec v = zeros(alg.dim());
    for (int m = i + 1; m <= k; ++m) v[m] = theta_coeff(m - i);
    alg.set_bracket(0, i, v);
  }
  return alg;
}

RMat vergne_from_eta(int k) {
  require(k >= 2, "filiform step k must be >= 2");
  RMat S(k, zeros(k));
  S[0][0] = 1;
  // Rows are 0-based here: S[i+1][j] = sum_{l=i}^{j-1} S[i][l] Theta_{j-l}.
  for (int i = 0; i + 1 < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      Rational acc(0);
      for (int l = i; l < j; ++l) acc += S[i][l] * theta_coeff(j - l);
      S[i + 1][j] = acc;
    }
  return S;
}

LieAlgebra change_basis(const LieAlgebra& eta, const RMat& S,
                        std::vector<std::string> names) {
  const std::size_t k = eta.dim() - 1;
  require(S.size() == k, "basis change has wrong size");
  for (std::size_t i = 0; i < k; ++i) {
    require(S[i].size() == k, "basis change has wrong size");
    require(S[i][i] == Rational(1), "basis change must be unit upper triangular");
    for (std::size_t j = 0; j < i; ++j)
      require(S[i][j].numerator() == 0, "basis change must be unit upper triangular");
  }
  require(names.size() == k + 1, "basis name count mismatch");
  const std::size_t n = k + 1;
  auto in_eta = [&](std::size_t a) {
    RVec v = zeros(n);
    if (a == 0) {
      v[0] = 1;
    } else {
      for (std::size_t j = 0; j < k; ++j) v[j + 1] = S[a - 1][j];
    }
    return v;
  };
  // Coordinates c with sum c_a f_a = w; forward substitution on unit S.
  auto to_new = [&](const RVec& w) {
    RVec c = zeros(n);
    c[0] = w[0];
    for (std::size_t j = 0; j < k; ++j) {
      Rational acc = w[j + 1];
      for (std::size_t i = 0; i < j; ++i) acc -= c[i + 1] * S[i][j];
      c[j + 1] = acc;
    }
    return c;
  };
  LieAlgebra out(eta.k(), std::move(names));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      out.set_bracket(a, b, to_new(eta.bracket(in_eta(a), in_eta(b))));
  return out;
}

std::vector<double> ad_exp(const FiliformAlgebra& alg, double t,
                           const std::vector<double>& v) {
  const std::size_t k = alg.dim() - 1;
  if (v.size() != k) throw InvalidParameter("vector dimension mismatch");
  const RMat A = ad_x_matrix(alg);
  std::vector<double> out = v, term = v, next(k);
  for (std::size_t j = 1; j <= k; ++j) {
    for (std::size_t r = 0; r < k; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < k; ++c)
        if (A[r][c].numerator() != 0) acc += boost::rational_cast<double>(A[r][c]) * term[c];
      next[r] = acc * t / static_cast<double>(j);
    }
    term.swap(next);
    for (std::size_t r = 0; r < k; ++r) out[r] += term[r];
  }
  return out;
}

RMat ad_exp_matrix(int k, const Rational& t) {
  require(k >= 2, "filiform step k must be >= 2");
  RMat M(k, zeros(k));
  for (int c = 0; c < k; ++c) {
    Rational coef(1);
    for (int r = c; r < k; ++r) {
      M[r][c] = coef;
      coef = coef * t / Rational(r - c + 1);
    }
  }
  return M;
}

double gen_binomial(double t, int l) {
  double out = 1.0;
  for (int m = 0; m < l; ++m) out *= (t - m) / (m + 1);
  return out;
}

std::vector<double> h_auto(int k, double t, const std::vector<double>& s) {
  require(static_cast<int>(s.size()) == k, "point dimension mismatch");
  std::vector<double> out(k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int l = 0; l <= i; ++l) out[i] += gen_binomial(t, l) * s[i - l];
  return out;
}

int QuasiAbelianAlgebra::position(int i, int j) const {
  for (std::size_t p = 0; p < index_set.size(); ++p)
    if (index_set[p] == std::make_pair(i, j)) return static_cast<int>(p) + 1;
  return -1;
}

RVec QuasiAbelianAlgebra::project(const RVec& v) const {
  require(v.size() == algebra.dim(), "vector dimension mismatch");
  RVec out = zeros(static_cast<std::size_t>(k) + 1);
  out[0] = v[0];
  for (std::size_t p = 0; p < index_set.size(); ++p) {
    const auto [i, j] = index_set[p];
    out[static_cast<std::size_t>(i + j - 1)] += v[p + 1];
  }
  return out;
}

bool QuasiAbelianAlgebra::quotient_is_filiform() const {
  const FiliformAlgebra fil = make_filiform(k);
  const std::size_t n = algebra.dim();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      RVec ea = zeros(n), eb = zeros(n);
      ea[a] = 1;
      eb[b] = 1;
      if (project(algebra.bracket(ea, eb)) != fil.bracket(project(ea), project(eb)))
        return false;
    }
  const RVec zero = zeros(static_cast<std::size_t>(k) + 1);
  return std::all_of(ideal_basis.begin(), ideal_basis.end(),
                     [&](const RVec& v) { return project(v) == zero; });
}

QuasiAbelianAlgebra make_quasi_abelian(int k) {
  require(k >= 2, "filiform step k must be >= 2");
  QuasiAbelianAlgebra qa{k, {}, LieAlgebra(k, {}), {}};
  for (int j = 1; j <= k; ++j)
    for (int i = 1; i + j <= k + 1; ++i) qa.index_set.emplace_back(i, j);
  std::vector<std::string> names{"X"};
  for (const auto& [i, j] : qa.index_set)
    names.push_back("Y" + std::to_string(i) + "_" + std::to_string(j));
  qa.algebra = LieAlgebra(k, names);
  const std::size_t n = qa.algebra.dim();
  for (const auto& [i, j] : qa.index_set) {
    const int to = qa.position(i + 1, j);
    if (to < 0) continue;
    RVec v = zeros(n);
    v[static_cast<std::size_t>(to)] = 1;
    qa.algebra.set_bracket(0, static_cast<std::size_t>(qa.position(i, j)), v);
  }
  for (const auto& [i, j] : qa.index_set) {
    const int hi = qa.position(i + 1, j - 1);
    if (hi < 0) continue;
    RVec v = zeros(n);
    v[static_cast<std::size_t>(hi)] = 1;
    v[static_cast<std::size_t>(qa.position(i, j))] = -1;
    qa.ideal_basis.push_back(v);
  }
  return qa;
}

RVec conjugating_element(const FiliformAlgebra& alg, const RVec& alpha,
                         const RVec& beta) {
  const std::size_t k = alg.dim() - 1;
  require(alpha.size() == k && beta.size() == k, "frequency dimension mismatch");
  if (alpha[0] != beta[0])
    throw NoSolution("conjugating element needs alpha_1 == beta_1");
  RVec d(k);
  for (std::size_t i = 0; i < k; ++i) d[i] = beta[i] - alpha[i];
  return solve_exact(ad_x_matrix(alg), d);
}

std::vector<double> conjugating_element(const FiliformAlgebra& alg,
                                        const std::vector<double>& alpha,
                                        const std::vector<double>& beta,
                                        double tol) {
  const std::size_t k = alg.dim() - 1;
  require(alpha.size() == k && beta.size() == k, "frequency dimension mismatch");
  if (std::abs(alpha[0] - beta[0]) > tol)
    throw NoSolution("conjugating element needs alpha_1 == beta_1");
  const RMat A = ad_x_matrix(alg);
  // ad_X is nilpotent lower triangular; solve from Y_2 down, centre set to 0.
  std::vector<double> y(k, 0.0);
  for (std::size_t r = 1; r < k; ++r) {
    double rhs = beta[r] - alpha[r];
    for (std::size_t c = 0; c + 1 < r; ++c)
      rhs -= boost::rational_cast<double>(A[r][c]) * y[c];
    const double piv = boost::rational_cast<double>(A[r][r - 1]);
    if (piv == 0.0) throw NoSolution("ad_X is not a regular shift");
    y[r - 1] = rhs / piv;
  }
  return y;
}

}  // namespace filab
