// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "hexdiv/rational.hpp"

namespace hexdiv {

// ---------------------------------------------------------------------------
// Exact-coefficient polynomials on the reference cube (and reference faces).
// Construction-time algebra is rational; evaluation goes through flattened
// double-coefficient copies (FlatPoly / FlatPoly2).
// ---------------------------------------------------------------------------

using Exps3 = std::array<int, 3>;
using Exps2 = std::array<int, 2>;

/// Trivariate polynomial with rational coefficients.  No zero terms stored.
class MultiPoly {
 public:
  MultiPoly() = default;
  static MultiPoly constant(const Rat& c);
  static MultiPoly monomial(int a, int b, int c, const Rat& coef = Rat(1));
  /// The coordinate polynomial x_axis (axis in 0..2).
  static MultiPoly var(int axis);

  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  int degree_in(int axis) const;

  const std::map<Exps3, Rat>& terms() const { return terms_; }
  Rat coeff(int a, int b, int c) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator-() const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly scaled(const Rat& s) const;

  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

  MultiPoly derivative(int axis) const;

  Rat evaluate(const Rat& x, const Rat& y, const Rat& z) const;
  double evaluate(double x, double y, double z) const;

  /// Substitute args[k] for variable k (polynomial composition).
  MultiPoly compose(const std::array<MultiPoly, 3>& args) const;

  /// Substitute x_axis := c0 + c1 * x_axis, other variables unchanged.
  MultiPoly substitute_axis_affine(int axis, const Rat& c0, const Rat& c1) const;

  /// Rename variables: new variable perm[k] receives old variable k.
  MultiPoly permute_vars(const std::array<int, 3>& perm) const;

  /// Exact integral over [0,1]^3.
  Rat integral_unit_cube() const;

  void add_term(const Exps3& e, const Rat& c);

 private:
  std::map<Exps3, Rat> terms_;
};

/// Bivariate polynomial with rational coefficients (face-local).
class FacePoly {
 public:
  FacePoly() = default;
  static FacePoly constant(const Rat& c);
  static FacePoly monomial(int a, int b, const Rat& coef = Rat(1));
  static FacePoly var(int which);  // 0 or 1

  bool is_zero() const { return terms_.empty(); }
  int degree_in(int which) const;
  int total_degree() const;
  const std::map<Exps2, Rat>& terms() const { return terms_; }
  Rat coeff(int a, int b) const;

  FacePoly& operator+=(const FacePoly& o);
  FacePoly& operator-=(const FacePoly& o);
  FacePoly operator+(const FacePoly& o) const;
  FacePoly operator-(const FacePoly& o) const;
  FacePoly operator-() const;
  FacePoly operator*(const FacePoly& o) const;
  FacePoly scaled(const Rat& s) const;
  bool operator==(const FacePoly& o) const { return terms_ == o.terms_; }

  Rat evaluate(const Rat& s, const Rat& t) const;
  double evaluate(double s, double t) const;

  /// Exact integral over [0,1]^2.
  Rat integral_unit_square() const;

  void add_term(const Exps2& e, const Rat& c);

 private:
  std::map<Exps2, Rat> terms_;
};

/// 3-vector of MultiPoly.
struct VectorPoly {
  std::array<MultiPoly, 3> comp;

  VectorPoly() = default;
  explicit VectorPoly(std::array<MultiPoly, 3> c) : comp(std::move(c)) {}

  MultiPoly& operator[](int k) { return comp[k]; }
  const MultiPoly& operator[](int k) const { return comp[k]; }

  VectorPoly operator+(const VectorPoly& o) const;
  VectorPoly operator-(const VectorPoly& o) const;
  VectorPoly scaled(const Rat& s) const;
  bool is_zero() const;

  MultiPoly divergence() const;
  VectorPoly curl() const;

  bool operator==(const VectorPoly& o) const {
    return comp[0] == o.comp[0] && comp[1] == o.comp[1] && comp[2] == o.comp[2];
  }
};

/// Restrict p to the reference face {x_axis = value}, in the remaining two
/// variables in ascending axis order.
FacePoly restrict_to_face(const MultiPoly& p, int axis, int value01);

// --- flattened double-coefficient evaluators --------------------------------

struct FlatPoly {
  struct Term {
    double c;
    std::uint8_t e[3];
  };
  std::vector<Term> terms;
  int max_deg = 0;

  static FlatPoly from(const MultiPoly& p);
  double eval(double x, double y, double z) const;
  double eval_pows(const double* xp, const double* yp, const double* zp) const;
  bool empty() const { return terms.empty(); }
};

struct FlatPoly2 {
  struct Term {
    double c;
    std::uint8_t e[2];
  };
  std::vector<Term> terms;

  static FlatPoly2 from(const FacePoly& p);
  double eval(double s, double t) const;
  bool empty() const { return terms.empty(); }
};

struct FlatVectorPoly {
  FlatPoly comp[3];
  static FlatVectorPoly from(const VectorPoly& v);
};

/// Power table helper: fills p[0..deg] with x^k.
inline void fill_pows(double x, int deg, double* p) {
  p[0] = 1.0;
  for (int k = 1; k <= deg; ++k) p[k] = p[k - 1] * x;
}

// --- polynomial space bases --------------------------------------------------

/// dim P_r(R^3) = (r+1)(r+2)(r+3)/6
int dim_P3(int r);
/// dim P_r(R^2) = (r+1)(r+2)/2
int dim_P2(int r);

/// Monomial basis of P_r (total degree <= r), graded lexicographic.
std::vector<MultiPoly> basis_P(int r);
/// Vector monomial basis of (P_r)^3.
std::vector<VectorPoly> basis_vec_P(int r);
/// Basis of x * Ptilde_r (homogeneous degree r scalar times x).
std::vector<VectorPoly> basis_x_tildeP(int r);
/// Linearly independent basis of Curl P_{r+1}^3, selected by exact
/// elimination from curls of vector monomials.
std::vector<VectorPoly> basis_curl_P(int rp1);

/// dim(Curl P_{r+1}^3 ⊕ x P_0) = (r+2)(r+1)(2r+9)/6 + 1
int dim_curl_plus_x(int r);

}  // namespace hexdiv
