// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "hexdiv/polynomial.hpp"

using namespace hexdiv;

TEST_CASE("divergence of (x1, 0, 0) is the constant 1") {
  VectorPoly v;
  v[0] = MultiPoly::var(0);
  CHECK(v.divergence() == MultiPoly::constant(Rat(1)));
}

TEST_CASE("curl of a product of linear forms expands by the product rule") {
  // curl(a b n) = -a grad(b) x n - b grad(a) x n for linear a, b and constant n.
  MultiPoly a = MultiPoly::var(0) + MultiPoly::var(1).scaled(Rat(2));
  MultiPoly b = MultiPoly::var(2) - MultiPoly::constant(Rat(1, 3));
  std::array<Rat, 3> n{Rat(1), Rat(-1), Rat(2)};
  VectorPoly field;
  for (int k = 0; k < 3; ++k) field[k] = (a * b).scaled(n[k]);
  VectorPoly c = field.curl();
  // grad a = (1,2,0), grad b = (0,0,1)
  std::array<Rat, 3> ga{Rat(1), Rat(2), Rat(0)}, gb{Rat(0), Rat(0), Rat(1)};
  auto cross = [](const std::array<Rat, 3>& u, const std::array<Rat, 3>& w) {
    return std::array<Rat, 3>{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2],
                              u[0] * w[1] - u[1] * w[0]};
  };
  auto gaxn = cross(ga, n), gbxn = cross(gb, n);
  VectorPoly want;
  for (int k = 0; k < 3; ++k) want[k] = a.scaled(gbxn[k]) + b.scaled(gaxn[k]);
  for (int k = 0; k < 3; ++k) CHECK(c[k] == want[k]);
}

TEST_CASE("compose with the identity substitution is the identity") {
  MultiPoly p = MultiPoly::monomial(2, 1, 0, Rat(3)) + MultiPoly::monomial(0, 0, 3, Rat(-1, 2));
  std::array<MultiPoly, 3> id{MultiPoly::var(0), MultiPoly::var(1), MultiPoly::var(2)};
  CHECK(p.compose(id) == p);
}

TEST_CASE("space dimensions") {
  CHECK(dim_P3(1) * 3 == 12);                  // dim P_1^3
  CHECK(dim_curl_plus_x(1) == 12);             // n for r = 1
  CHECK(dim_curl_plus_x(0) == 4);              // P_0^3 + x P_0
  CHECK(basis_P(2).size() == (size_t)dim_P3(2));
  CHECK(basis_vec_P(1).size() == 12);
  CHECK(basis_x_tildeP(1).size() == 3);
}

TEST_CASE("basis_curl_P spans the right dimension") {
  // dim Curl P_{r+1}^3 = 3 dim P_{r+1} - (dim P_{r+2} - 1)
  for (int r = 0; r <= 2; ++r) {
    int want = 3 * dim_P3(r + 1) - (dim_P3(r + 2) - 1);
    CHECK(basis_curl_P(r + 1).size() == (size_t)want);
    CHECK(want + 1 == dim_curl_plus_x(r));
  }
}

TEST_CASE("curl fields are exactly divergence free") {
  for (const VectorPoly& v : basis_curl_P(2)) CHECK(v.divergence().is_zero());
}

TEST_CASE("derivative and integral") {
  MultiPoly p = MultiPoly::monomial(2, 0, 1, Rat(6));
  CHECK(p.derivative(0) == MultiPoly::monomial(1, 0, 1, Rat(12)));
  CHECK(p.integral_unit_cube() == Rat(1));  // 6 * (1/3)(1)(1/2)
}

TEST_CASE("restrict_to_face") {
  MultiPoly p = MultiPoly::monomial(1, 2, 0) + MultiPoly::monomial(0, 0, 1, Rat(5));
  FacePoly f1 = restrict_to_face(p, 0, 1);  // x0 = 1 -> x1^2 + 5 x2
  CHECK(f1.coeff(2, 0) == Rat(1));
  CHECK(f1.coeff(0, 1) == Rat(5));
  FacePoly f0 = restrict_to_face(p, 0, 0);  // x0 = 0 -> 5 x2
  CHECK(f0.coeff(2, 0) == Rat(0));
  CHECK(f0.coeff(0, 1) == Rat(5));
}

TEST_CASE("flattened evaluation agrees with exact evaluation") {
  MultiPoly p = MultiPoly::monomial(3, 1, 2, Rat(7, 3)) + MultiPoly::monomial(0, 2, 0, Rat(-1, 8));
  FlatPoly f = FlatPoly::from(p);
  double x = 0.37, y = 0.81, z = 0.19;
  CHECK(f.eval(x, y, z) ==
        doctest::Approx(to_double(p.evaluate(rat_from(x), rat_from(y), rat_from(z)))).epsilon(1e-14));
}
