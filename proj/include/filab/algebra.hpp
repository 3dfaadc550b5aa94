// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include "json.hpp"

namespace filab {

using Rational = boost::rational<std::int64_t>;
using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;

// Nilpotent Lie algebra given by exact structure constants on a fixed basis.
// Basis index 0 is always the flow generator (X or xi).
class LieAlgebra {
 public:
  LieAlgebra(int k, std::vector<std::string> names);

  int k() const noexcept { return k_; }
  std::size_t dim() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  // [e_i, e_j] as a coefficient vector.
  const RVec& bracket_basis(std::size_t i, std::size_t j) const;
  RVec bracket(const RVec& u, const RVec& v) const;

  // Sets [e_i, e_j] = v and [e_j, e_i] = -v.
  void set_bracket(std::size_t i, std::size_t j, const RVec& v);

  // Largest absolute coefficient of the Jacobiator over all basis triples.
  Rational jacobi_residual() const;

  bool same_table(const LieAlgebra& other) const;

  nlohmann::json to_json() const;

 private:
  int k_;
  std::vector<std::string> names_;
  std::vector<RVec> table_;  // dim*dim entries, row-major
};

using FiliformAlgebra = LieAlgebra;

// Canonical basis X, Y1..Yk with [X,Y_i] = Y_{i+1}.
FiliformAlgebra make_filiform(int k);

// Basis xi, eta1..etak with [xi, eta_i] = sum_{m>i} Theta_{m-i} eta_m.
FiliformAlgebra make_eta_filiform(int k);

Rational theta_coeff(int m);

// Upper unitriangular S with Y_i = sum_j S_{ij} eta_j; row i is Y_i in eta coordinates.
RMat vergne_from_eta(int k);

// Rewrites the bracket table of `eta` in the basis (xi, Y_1..Y_k) defined by
// the rows of S. S must be unit upper triangular.
LieAlgebra change_basis(const LieAlgebra& eta, const RMat& S,
                        std::vector<std::string> names);

// Ad(e^{tX}) on the abelian ideal, coordinates over (Y_1..Y_k).
std::vector<double> ad_exp(const FiliformAlgebra& alg, double t,
                           const std::vector<double>& v);
RMat ad_exp_matrix(int k, const Rational& t);

// Generalized binomial coefficient t(t-1)...(t-l+1)/l!.
double gen_binomial(double t, int l);

// The one-parameter automorphism group h_t acting on the section torus
// coordinates: s'_i = sum_{l=0}^{i-1} binom(t,l) s_{i-l}.
std::vector<double> h_auto(int k, double t, const std::vector<double>& s);

struct QuasiAbelianAlgebra {
  int k = 0;
  std::vector<std::pair<int, int>> index_set;  // (i,j), lexicographic in (j,i)
  LieAlgebra algebra;
  std::vector<RVec> ideal_basis;  // Y_{i+1,j-1} - Y_{i,j}

  // Basis position of Y_{i,j}, or -1 when (i,j) is outside the index set.
  int position(int i, int j) const;
  // Projection onto the filiform quotient: Y_{i,j} -> Y_{i+j-1}.
  RVec project(const RVec& v) const;
  // True when the projection is a homomorphism onto make_filiform(k) and the
  // ideal lies in its kernel.
  bool quotient_is_filiform() const;
};

QuasiAbelianAlgebra make_quasi_abelian(int k);

// Y over (Y_1..Y_k) with ad_X(Y) = X_beta - X_alpha, where
// X_a = -X + sum a_i Y_i; the centre component is set to 0.
// Throws NoSolution unless alpha_1 == beta_1.
RVec conjugating_element(const FiliformAlgebra& alg, const RVec& alpha,
                         const RVec& beta);
std::vector<double> conjugating_element(const FiliformAlgebra& alg,
                                        const std::vector<double>& alpha,
                                        const std::vector<double>& beta,
                                        double tol = 0.0);

std::string to_string(const Rational& r);

}  // namespace filab
