// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "hexdiv/quadrature.hpp"
#include "hexdiv/random_hex.hpp"
#include "hexdiv/supplement.hpp"

using namespace hexdiv;

namespace {

// Physical normal trace of an ElementFunction at a reference face point.
double physical_trace(const Hexahedron& hex, const ElementFunction& fn, int face, double s,
                      double t) {
  const FaceData& fd = hex.face(face);
  return fn.trace_ref(face, s, t) / fd.jac_flat.eval(s, t);
}

}  // namespace

TEST_CASE("pre-supplement closed forms on face 1") {
  // psi^1_{0,0} = (x1, 0, 0)
  auto p00 = presupplement(1, 0, 0);
  CHECK(p00->v[0] == MultiPoly::var(0));
  CHECK(p00->v[1].is_zero());
  CHECK(p00->v[2].is_zero());
  CHECK(p00->div == MultiPoly::constant(Rat(1)));

  // psi^1_{1,0} = (x1 x2 - x1/2, x2(1-x2)/2, 0)
  auto p10 = presupplement(1, 1, 0);
  MultiPoly want0 = MultiPoly::monomial(1, 1, 0) - MultiPoly::var(0).scaled(Rat(1, 2));
  MultiPoly want1 = (MultiPoly::var(1) - MultiPoly::monomial(0, 2, 0)).scaled(Rat(1, 2));
  CHECK(p10->v[0] == want0);
  CHECK(p10->v[1] == want1);
  CHECK(p10->v[2].is_zero());
  CHECK(p10->div.is_zero());
  // face-1 trace x2 - 1/2
  CHECK(p10->trace[1] == FacePoly::var(0) - FacePoly::constant(Rat(1, 2)));

  // psi^1_{1,1} face-1 trace = x2 x3 - 1/4
  auto p11 = presupplement(1, 1, 1);
  CHECK(p11->trace[1] == FacePoly::monomial(1, 1) - FacePoly::constant(Rat(1, 4)));
}

TEST_CASE("pre-supplements on every face satisfy the contracts exactly") {
  for (int f = 0; f < 6; ++f)
    for (int l = 0; l <= 2; ++l)
      for (int m = 0; m <= 2; ++m) {
        auto psi = presupplement(f, l, m);
        if (l + m >= 1) {
          CHECK(psi->div.is_zero());
          FacePoly want =
              FacePoly::monomial(l, m) - FacePoly::constant(Rat(1, (l + 1) * (m + 1)));
          CHECK(psi->trace[f] == want);
        } else {
          CHECK(psi->div == MultiPoly::constant(Rat(1)));
          CHECK(psi->trace[f] == FacePoly::constant(Rat(1)));
        }
        for (int g = 0; g < 6; ++g)
          if (g != f) CHECK(psi->trace[g].is_zero());
      }
}

TEST_CASE("face bubble: zero divergence and no normal trace") {
  auto b1 = face_bubble(FacePoly::constant(Rat(1)));
  CHECK(b1->div.is_zero());
  for (int f = 0; f < 6; ++f) CHECK(b1->trace[f].is_zero());

  auto bp = face_bubble(FacePoly::monomial(2, 1, Rat(3)) - FacePoly::var(1));
  CHECK(bp->div.is_zero());
  for (int f = 0; f < 6; ++f) CHECK(bp->trace[f].is_zero());

  auto b0 = face_bubble(FacePoly());
  CHECK(b0->v.is_zero());
}

TEST_CASE("flux coefficient expansion on the unit cube") {
  Hexahedron cube = unit_cube();
  FluxCoeffs f00 = expand_flux_coeffs(cube, 1, 0, 0);
  CHECK(f00.a00 == Rat(1));  // alpha_00 = |f_1| = 1, scale s = 1
  for (int a = 0; a < f00.size; ++a)
    for (int b = 0; b < f00.size; ++b)
      if (a || b) CHECK(f00.a[a][b] == Rat(0));

  FluxCoeffs f10 = expand_flux_coeffs(cube, 1, 1, 0);
  CHECK(f10.a[1][0] == Rat(1));
  CHECK(f10.a00 == Rat(1, 2));
  CHECK(f10.a[0][1] == Rat(0));
  CHECK(f10.a[1][1] == Rat(0));
}

TEST_CASE("alpha_00 equals the face integral of the monomial (quadrature oracle)") {
  std::mt19937_64 rng(53);
  Hexahedron hex = random_hex(rng);
  const QuadratureRule& q2 = gauss_rule(2, 10);
  for (int face = 0; face < 6; ++face) {
    const FaceData& fd = hex.face(face);
    for (auto [l, m] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 0}}) {
      FluxCoeffs fc = expand_flux_coeffs(hex, face, l, m);
      double integral = 0;
      for (std::size_t q = 0; q < q2.size(); ++q) {
        double s = q2.points[q][0], t = q2.points[q][1];
        Vec3 xhat;
        xhat[fd.axis] = fd.odd ? 1.0 : 0.0;
        xhat[fd.ref_p] = s;
        xhat[fd.ref_q] = t;
        Vec3 x = hex.map(xhat);
        integral += q2.weights[q] * std::pow(x[fd.loc_i], l) * std::pow(x[fd.loc_j], m) *
                    fd.jac_flat.eval(s, t);
      }
      CHECK(fc.alpha(0, 0, fd.normal_scale) == doctest::Approx(integral).epsilon(1e-12));
    }
  }
}

TEST_CASE("reconstruction identity: sum a_ab basis_ab = R * (monomial o F), exactly") {
  std::mt19937_64 rng(59);
  Hexahedron hex = random_hex(rng);
  for (int face : {0, 3, 5}) {
    const FaceData& fd = hex.face(face);
    const int val = fd.odd ? 1 : 0;
    for (auto [l, m] : {std::pair{1, 0}, {1, 1}}) {
      FluxCoeffs fc = expand_flux_coeffs(hex, face, l, m);
      FacePoly sum;
      for (int a = 0; a < fc.size; ++a)
        for (int b = 0; b < fc.size; ++b) {
          if (fc.a[a][b] == 0) continue;
          if (a == 0 && b == 0) {
            sum += FacePoly::constant(fc.a[0][0]);
          } else {
            FacePoly basis =
                FacePoly::monomial(a, b) - FacePoly::constant(Rat(1, (a + 1) * (b + 1)));
            sum += basis.scaled(fc.a[a][b]);
          }
        }
      FacePoly Fi = restrict_to_face(hex.map_poly()[fd.loc_i], fd.axis, val);
      FacePoly Fj = restrict_to_face(hex.map_poly()[fd.loc_j], fd.axis, val);
      FacePoly want = fd.jac_scaled;
      for (int k = 0; k < l; ++k) want = want * Fi;
      for (int k = 0; k < m; ++k) want = want * Fj;
      CHECK(sum == want);
    }
  }
}

TEST_CASE("constant-flux supplement sigma^i_00") {
  Hexahedron cube = unit_cube();
  ElementFunction s = supplement_const(cube, 1);
  REQUIRE(s.terms().size() == 1);
  // on the unit cube sigma^1_00 = (x1, 0, 0)
  CHECK(s.terms()[0].f->v[0] == MultiPoly::var(0));
  CHECK(s.terms()[0].f->v[1].is_zero());
  CHECK(s.terms()[0].c == doctest::Approx(1.0));

  std::mt19937_64 rng(61);
  Hexahedron hex = random_hex(rng);
  for (int f = 0; f < 6; ++f) {
    CHECK(verify_supplement_const_exact(hex, f));
    // integral of the reference trace over the reference face equals |f_i|
    ElementFunction sc = supplement_const(hex, f);
    sc.finalize();
    const QuadratureRule& q2 = gauss_rule(2, 4);
    double flux = 0;
    for (std::size_t q = 0; q < q2.size(); ++q)
      flux += q2.weights[q] * sc.trace_ref(f, q2.points[q][0], q2.points[q][1]);
    CHECK(flux == doctest::Approx(hex.face(f).area).epsilon(1e-13));
  }
}

TEST_CASE("monomial supplements sigma^i_lm") {
  Hexahedron cube = unit_cube();
  ElementFunction s = supplement_monomial(cube, 1, 1, 0);
  REQUIRE(s.terms().size() == 1);
  CHECK(s.terms()[0].f->v == presupplement(1, 1, 0)->v);  // coincide on the cube
  s.finalize();
  CHECK(physical_trace(cube, s, 1, 0.3, 0.8) == doctest::Approx(0.3 - 0.5).epsilon(1e-13));

  std::mt19937_64 rng(67);
  const QuadratureRule& q2 = gauss_rule(2, 5);
  for (int trial = 0; trial < 3; ++trial) {
    Hexahedron hex = random_hex(rng);
    for (int face = 0; face < 6; ++face) {
      const FaceData& fd = hex.face(face);
      for (auto [l, m] : {std::pair{1, 0}, {0, 1}, {1, 1}}) {
        CHECK(verify_supplement_monomial_exact(hex, face, l, m));
        ElementFunction sm = supplement_monomial(hex, face, l, m);
        CHECK(sm.divergence_exactly_zero());
        sm.finalize();
        double c = to_double(face_monomial_average(hex, face, l, m));
        for (std::size_t q = 0; q < q2.size(); ++q) {
          double s1 = q2.points[q][0], t1 = q2.points[q][1];
          Vec3 xhat;
          xhat[fd.axis] = fd.odd ? 1.0 : 0.0;
          xhat[fd.ref_p] = s1;
          xhat[fd.ref_q] = t1;
          Vec3 x = hex.map(xhat);
          double want = std::pow(x[fd.loc_i], l) * std::pow(x[fd.loc_j], m) - c;
          CHECK(physical_trace(hex, sm, face, s1, t1) == doctest::Approx(want).epsilon(1e-10));
        }
        for (int g = 0; g < 6; ++g)
          if (g != face) CHECK(sm.terms()[0].f->trace[g].is_zero());
      }
    }
  }
}

TEST_CASE("face-average constant matches the quadrature oracle") {
  std::mt19937_64 rng(71);
  Hexahedron hex = random_hex(rng);
  const QuadratureRule& q2 = gauss_rule(2, 10);
  for (int face : {1, 4}) {
    const FaceData& fd = hex.face(face);
    for (auto [l, m] : {std::pair{1, 0}, {1, 1}}) {
      double num = 0, den = 0;
      for (std::size_t q = 0; q < q2.size(); ++q) {
        double s = q2.points[q][0], t = q2.points[q][1];
        Vec3 xhat;
        xhat[fd.axis] = fd.odd ? 1.0 : 0.0;
        xhat[fd.ref_p] = s;
        xhat[fd.ref_q] = t;
        Vec3 x = hex.map(xhat);
        double K = fd.jac_flat.eval(s, t);
        num += q2.weights[q] * std::pow(x[fd.loc_i], l) * std::pow(x[fd.loc_j], m) * K;
        den += q2.weights[q] * K;
      }
      CHECK(to_double(face_monomial_average(hex, face, l, m)) ==
            doctest::Approx(num / den).epsilon(1e-12));
    }
  }
}

TEST_CASE("pair supplements sigma^{i,j}") {
  Hexahedron cube = unit_cube();
  ElementFunction p13 = supplement_pair(cube, 1, 3);
  p13.finalize();
  CHECK(physical_trace(cube, p13, 1, 0.4, 0.7) == doctest::Approx(1.0));
  CHECK(physical_trace(cube, p13, 3, 0.4, 0.7) == doctest::Approx(-1.0));

  std::mt19937_64 rng(73);
  const QuadratureRule& q2 = gauss_rule(2, 5);
  for (int trial = 0; trial < 3; ++trial) {
    Hexahedron hex = random_hex(rng);
    for (auto [i, j] : {std::pair{1, 3}, {3, 5}, {0, 4}, {2, 1}}) {
      CHECK(verify_supplement_pair_exact(hex, i, j));
      ElementFunction pij = supplement_pair(hex, i, j);
      CHECK(pij.divergence_exactly_zero());
      pij.finalize();
      // total boundary flux vanishes (divergence theorem, zero divergence)
      double total = 0;
      for (int f = 0; f < 6; ++f)
        for (std::size_t q = 0; q < q2.size(); ++q)
          total += q2.weights[q] * pij.trace_ref(f, q2.points[q][0], q2.points[q][1]);
      CHECK(total == doctest::Approx(0.0).epsilon(1e-12));
      // prescribed traces at 9 Gauss points
      for (std::size_t q = 0; q < 9; ++q) {
        double s = q2.points[q][0], t = q2.points[q][1];
        CHECK(physical_trace(hex, pij, i, s, t) ==
              doctest::Approx(1.0 / hex.face(i).area).epsilon(1e-10));
        CHECK(physical_trace(hex, pij, j, s, t) ==
              doctest::Approx(-1.0 / hex.face(j).area).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("adding a face bubble changes neither divergence nor traces, exactly") {
  std::mt19937_64 rng(79);
  Hexahedron hex = random_hex(rng);
  ElementFunction sm = supplement_monomial(hex, 1, 1, 0);
  auto bub = face_bubble(FacePoly::monomial(1, 1) + FacePoly::constant(Rat(2)));
  VectorPoly sum = sm.terms()[0].f->v + bub->v;
  auto combined = make_ref_function(sum, "sum");
  CHECK(combined->div == sm.terms()[0].f->div);
  for (int f = 0; f < 6; ++f) CHECK(combined->trace[f] == sm.terms()[0].f->trace[f]);
}

TEST_CASE("supplement_variable realizes x_l - c_l on a face") {
  std::mt19937_64 rng(83);
  Hexahedron hex = random_hex(rng);
  SupplementFactory fac(hex);
  const QuadratureRule& q2 = gauss_rule(2, 5);
  for (int face = 0; face < 6; ++face) {
    const FaceData& fd = hex.face(face);
    for (int axis = 0; axis < 3; ++axis) {
      ElementFunction sv = fac.supplement_variable(face, axis);
      CHECK(sv.divergence_exactly_zero());
      sv.finalize();
      // face average of x_axis via quadrature
      double num = 0, den = 0;
      for (std::size_t q = 0; q < q2.size(); ++q) {
        double s = q2.points[q][0], t = q2.points[q][1];
        Vec3 xhat;
        xhat[fd.axis] = fd.odd ? 1.0 : 0.0;
        xhat[fd.ref_p] = s;
        xhat[fd.ref_q] = t;
        double K = fd.jac_flat.eval(s, t);
        num += q2.weights[q] * hex.map(xhat)[axis] * K;
        den += q2.weights[q] * K;
      }
      double c = num / den;
      for (std::size_t q = 0; q < 4; ++q) {
        double s = q2.points[q][0], t = q2.points[q][1];
        Vec3 xhat;
        xhat[fd.axis] = fd.odd ? 1.0 : 0.0;
        xhat[fd.ref_p] = s;
        xhat[fd.ref_q] = t;
        double want = hex.map(xhat)[axis] - c;
        CHECK(physical_trace(hex, sv, face, s, t) == doctest::Approx(want).epsilon(1e-10));
      }
    }
  }
}
