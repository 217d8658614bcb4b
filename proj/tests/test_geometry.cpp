// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "hexdiv/geometry.hpp"
#include "hexdiv/quadrature.hpp"
#include "hexdiv/random_hex.hpp"

using namespace hexdiv;

namespace {

std::array<Vec3, 8> cube_verts() {
  std::array<Vec3, 8> v;
  for (int i = 0; i < 8; ++i) v[i] = Vec3(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  return v;
}

}  // namespace

TEST_CASE("trilinear map basics") {
  Hexahedron cube = unit_cube();
  Vec3 xh(0.3, 0.4, 0.5);
  CHECK((cube.map(xh) - xh).norm() == doctest::Approx(0.0));

  std::mt19937_64 rng(7);
  Hexahedron hex = random_hex(rng);
  CHECK((hex.map(Vec3(0, 0, 0)) - hex.vertex(0)).norm() == doctest::Approx(0.0));
  Vec3 mean = Vec3::Zero();
  for (int i = 0; i < 8; ++i) mean += hex.vertex(i);
  mean /= 8.0;
  CHECK((hex.map(Vec3(0.5, 0.5, 0.5)) - mean).norm() < 1e-14);
}

TEST_CASE("jacobian: cube, affine image, finite-difference oracle") {
  Hexahedron cube = unit_cube();
  CHECK((cube.jacobian_matrix(Vec3(0.2, 0.7, 0.9)) - Mat3::Identity()).norm() < 1e-14);
  CHECK(cube.jacobian_det(Vec3(0.5, 0.5, 0.5)) == doctest::Approx(1.0));

  Mat3 A;
  A << 1.0, 0.2, 0.1, 0.0, 1.5, -0.2, 0.1, 0.0, 0.8;
  std::array<Vec3, 8> v = cube_verts();
  for (auto& p : v) p = A * p + Vec3(0.3, -1.0, 2.0);
  Hexahedron aff(v);
  for (Vec3 xh : {Vec3(0.1, 0.2, 0.3), Vec3(0.9, 0.5, 0.4)})
    CHECK((aff.jacobian_matrix(xh) - A).norm() < 1e-13);

  std::mt19937_64 rng(3);
  Hexahedron hex = random_hex(rng);
  Vec3 xh(0.37, 0.52, 0.68);
  Mat3 J = hex.jacobian_matrix(xh);
  double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e[j] = h;
    Vec3 fd = (hex.map(xh + e) - hex.map(xh - e)) / (2 * h);
    for (int i = 0; i < 3; ++i) CHECK(J(i, j) == doctest::Approx(fd[i]).epsilon(1e-8));
  }
}

TEST_CASE("jacobian determinant is a polynomial of degree <= 2 per variable") {
  std::mt19937_64 rng(11);
  Hexahedron hex = random_hex(rng);
  for (int k = 0; k < 3; ++k) CHECK(hex.jac_det_poly().degree_in(k) <= 2);
  // sampled values match the exact expansion
  Vec3 xh(0.21, 0.83, 0.46);
  Mat3 J = hex.jacobian_matrix(xh);
  CHECK(J.determinant() ==
        doctest::Approx(to_double(hex.jac_det_poly().evaluate(
            rat_from(xh[0]), rat_from(xh[1]), rat_from(xh[2])))).epsilon(1e-12));
}

TEST_CASE("adjugate identity adj(DF) * DF = J * I, exactly") {
  std::mt19937_64 rng(5);
  Hexahedron hex = random_hex(rng);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      MultiPoly s;
      for (int k = 0; k < 3; ++k) s += hex.adj_entry(i, k) * hex.jac_entry(k, j);
      if (i == j)
        CHECK(s == hex.jac_det_poly());
      else
        CHECK(s.is_zero());
    }
}

TEST_CASE("piola transform identities") {
  Hexahedron cube = unit_cube();
  Vec3 vhat(0.3, -0.2, 0.9), xh(0.6, 0.1, 0.8);
  CHECK((cube.piola(vhat, xh) - vhat).norm() < 1e-15);

  std::mt19937_64 rng(17);
  Hexahedron hex = random_hex(rng);

  // divergence identity (reference route vs chain rule) at 27 Gauss points
  VectorPoly vp;
  vp[0] = MultiPoly::monomial(1, 1, 0, Rat(2));
  vp[1] = MultiPoly::monomial(0, 2, 0) - MultiPoly::var(2);
  vp[2] = MultiPoly::monomial(1, 0, 1, Rat(1, 3));
  MultiPoly divp = vp.divergence();
  const QuadratureRule& q3 = gauss_rule(3, 5);
  REQUIRE(q3.size() == 27);
  for (std::size_t q = 0; q < q3.size(); ++q) {
    Vec3 xhat(q3.points[q][0], q3.points[q][1], q3.points[q][2]);
    double jd = hex.jacobian_det(xhat);
    double ref = divp.evaluate(xhat[0], xhat[1], xhat[2]) / jd;
    // chain-rule numerical divergence of the mapped field
    double h = 1e-5, num = 0.0;
    Vec3 x = hex.map(xhat);
    for (int k = 0; k < 3; ++k) {
      Vec3 e = Vec3::Zero();
      e[k] = h;
      Vec3 xp = hex.inverse_map(x + e), xm = hex.inverse_map(x - e);
      auto vk = [&](const Vec3& xr) {
        Vec3 vh(vp[0].evaluate(xr[0], xr[1], xr[2]), vp[1].evaluate(xr[0], xr[1], xr[2]),
                vp[2].evaluate(xr[0], xr[1], xr[2]));
        return hex.piola(vh, xr)[k];
      };
      num += (vk(xp) - vk(xm)) / (2 * h);
    }
    CHECK(ref == doctest::Approx(num).epsilon(1e-5));
  }

  // normal identity v.nu = (1/K) vhat.nuhat at 9 face Gauss points
  const QuadratureRule& q2 = gauss_rule(2, 5);
  REQUIRE(q2.size() == 9);
  for (int f = 0; f < 6; ++f) {
    const FaceData& fd = hex.face(f);
    for (std::size_t q = 0; q < q2.size(); ++q) {
      double s = q2.points[q][0], t = q2.points[q][1];
      Vec3 xhat;
      xhat[fd.axis] = fd.odd ? 1.0 : 0.0;
      xhat[fd.ref_p] = s;
      xhat[fd.ref_q] = t;
      Vec3 vh(vp[0].evaluate(xhat[0], xhat[1], xhat[2]), vp[1].evaluate(xhat[0], xhat[1], xhat[2]),
              vp[2].evaluate(xhat[0], xhat[1], xhat[2]));
      double lhs = hex.piola(vh, xhat).dot(fd.normal);
      double nuhat = (fd.odd ? 1.0 : -1.0) * vh[fd.axis];
      double rhs = nuhat / fd.jac_flat.eval(s, t);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("face jacobian polynomial") {
  Hexahedron cube = unit_cube();
  for (int f = 0; f < 6; ++f) {
    const FaceData& fd = cube.face(f);
    CHECK(fd.jac_flat.eval(0.3, 0.8) == doctest::Approx(1.0).epsilon(1e-14));
  }

  // parallelogram face: constant face Jacobian equal to the face area
  Mat3 A;
  A << 1.0, 0.3, 0.0, 0.0, 1.0, 0.2, 0.1, 0.0, 1.0;
  std::array<Vec3, 8> v = cube_verts();
  for (auto& p : v) p = A * p;
  Hexahedron aff(v);
  for (int f = 0; f < 6; ++f) {
    const FaceData& fd = aff.face(f);
    for (double s : {0.0, 0.5, 1.0})
      for (double t : {0.0, 0.5, 1.0})
        CHECK(fd.jac_flat.eval(s, t) == doctest::Approx(fd.area).epsilon(1e-13));
  }

  // random flat-faced hex: K equals the cross-product norm at 5 random points
  std::mt19937_64 rng(23);
  Hexahedron hex = random_hex(rng);
  for (int f = 0; f < 6; ++f) {
    const FaceData& fd = hex.face(f);
    for (int trial = 0; trial < 5; ++trial) {
      double s = uniform01(rng), t = uniform01(rng);
      Vec3 xhat;
      xhat[fd.axis] = fd.odd ? 1.0 : 0.0;
      xhat[fd.ref_p] = s;
      xhat[fd.ref_q] = t;
      Mat3 J = hex.jacobian_matrix(xhat);
      Vec3 cp = J.col(fd.ref_p).cross(J.col(fd.ref_q));
      CHECK(fd.jac_flat.eval(s, t) == doctest::Approx(cp.norm()).epsilon(1e-12));
    }
  }
}

TEST_CASE("face data on the unit cube") {
  Hexahedron cube = unit_cube();
  const FaceData& f1 = cube.face(1);
  CHECK((f1.normal - Vec3(1, 0, 0)).norm() < 1e-15);
  CHECK(f1.area == doctest::Approx(1.0));
  CHECK((f1.centroid - Vec3(1, 0.5, 0.5)).norm() < 1e-15);
  CHECK(f1.loc_i == 1);
  CHECK(f1.loc_j == 2);
  const FaceData& f0 = cube.face(0);
  CHECK((f0.normal - Vec3(-1, 0, 0)).norm() < 1e-15);
  for (int f = 0; f < 6; ++f) {
    // outward orientation: normal points away from the cell center
    Vec3 out = cube.face(f).centroid - cube.center();
    CHECK(cube.face(f).normal.dot(out) > 0);
  }
}

TEST_CASE("face area equals the triangle-split area on a random hex") {
  std::mt19937_64 rng(31);
  Hexahedron hex = random_hex(rng);
  for (int f = 0; f < 6; ++f) {
    auto ci = face_corner_indices(f);
    const Vec3 &y0 = hex.vertex(ci[0]), &y1 = hex.vertex(ci[1]), &y2 = hex.vertex(ci[2]),
               &y3 = hex.vertex(ci[3]);
    double tri = 0.5 * ((y1 - y0).cross(y3 - y0)).norm() + 0.5 * ((y3 - y0).cross(y2 - y0)).norm();
    CHECK(hex.face(f).area == doctest::Approx(tri).epsilon(1e-12));
  }
}

TEST_CASE("divergence theorem for constants: sum |f_i| nu_i = 0") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    Hexahedron hex = random_hex(rng);
    Vec3 s = Vec3::Zero();
    for (int f = 0; f < 6; ++f) s += hex.face(f).area * hex.face(f).normal;
    CHECK(s.norm() < 1e-12);
  }
}

TEST_CASE("piola preserves face fluxes") {
  std::mt19937_64 rng(41);
  Hexahedron hex = random_hex(rng);
  VectorPoly vp;
  vp[0] = MultiPoly::monomial(1, 1, 1);
  vp[1] = MultiPoly::monomial(0, 2, 0, Rat(-1, 2));
  vp[2] = MultiPoly::var(0) + MultiPoly::constant(Rat(1, 4));
  const QuadratureRule& q2 = gauss_rule(2, 8);
  for (int f = 0; f < 6; ++f) {
    const FaceData& fd = hex.face(f);
    double phys = 0, ref = 0;
    for (std::size_t q = 0; q < q2.size(); ++q) {
      double s = q2.points[q][0], t = q2.points[q][1];
      Vec3 xhat;
      xhat[fd.axis] = fd.odd ? 1.0 : 0.0;
      xhat[fd.ref_p] = s;
      xhat[fd.ref_q] = t;
      Vec3 vh(vp[0].evaluate(xhat[0], xhat[1], xhat[2]), vp[1].evaluate(xhat[0], xhat[1], xhat[2]),
              vp[2].evaluate(xhat[0], xhat[1], xhat[2]));
      double nuhat = (fd.odd ? 1.0 : -1.0) * vh[fd.axis];
      // physical flux with area element K dA
      phys += q2.weights[q] * hex.piola(vh, xhat).dot(fd.normal) * fd.jac_flat.eval(s, t);
      ref += q2.weights[q] * nuhat;
    }
    CHECK(phys == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("inverse map") {
  Hexahedron cube = unit_cube();
  Vec3 x(0.3, 0.6, 0.2);
  CHECK((cube.inverse_map(x) - x).norm() < 1e-12);

  std::mt19937_64 rng(43);
  Hexahedron hex = random_hex(rng);
  for (int trial = 0; trial < 10; ++trial) {
    Vec3 xh(uniform01(rng), uniform01(rng), uniform01(rng));
    Vec3 rec = hex.inverse_map(hex.map(xh));
    CHECK((rec - xh).norm() < 1e-10);
  }

  std::array<Vec3, 8> v = cube_verts();
  Mat3 A;
  A << 2.0, 0.5, 0.0, 0.0, 1.0, 0.3, 0.0, 0.0, 1.4;
  for (auto& p : v) p = A * p;
  Hexahedron aff(v);
  CHECK((aff.inverse_map(aff.map(Vec3(0.25, 0.75, 0.5))) - Vec3(0.25, 0.75, 0.5)).norm() < 1e-12);
}

TEST_CASE("invalid elements are rejected") {
  // non-flat face
  std::array<Vec3, 8> v = cube_verts();
  v[7] += Vec3(0.0, 0.0, 0.3);  // breaks flatness of faces 1, 3, 5
  CHECK_THROWS_AS((void)Hexahedron(v), NonFlatFace);

  // inverted cell
  std::array<Vec3, 8> w = cube_verts();
  for (auto& p : w) p[0] = -p[0];
  CHECK_THROWS_AS((void)Hexahedron(w), Error);
}
