// SPDX-License-Identifier: Apache-2.0
#include "hexdiv/geometry.hpp"

#include <cmath>

namespace hexdiv {

std::array<int, 4> face_corner_indices(int face) {
  const int axis = face / 2;
  const int bit = face % 2;
  int p = (axis == 0) ? 1 : 0;
  int q = (axis == 2) ? 1 : 2;
  std::array<int, 4> out{};
  for (int cq = 0; cq < 2; ++cq)
    for (int cp = 0; cp < 2; ++cp) {
      int idx = 0;
      idx |= bit << axis;
      idx |= cp << p;
      idx |= cq << q;
      out[2 * cq + cp] = idx;  // y0,y1,y2,y3 in (p,q) bit order
    }
  return out;
}

Vec3 trilinear_map(const std::array<Vec3, 8>& verts, const Vec3& xhat) {
  Vec3 out = Vec3::Zero();
  const double b[3][2] = {{1 - xhat[0], xhat[0]}, {1 - xhat[1], xhat[1]}, {1 - xhat[2], xhat[2]}};
  for (int v = 0; v < 8; ++v) {
    double wv = b[0][v & 1] * b[1][(v >> 1) & 1] * b[2][(v >> 2) & 1];
    out += wv * verts[v];
  }
  return out;
}

Hexahedron::Hexahedron(const std::array<Vec3, 8>& vertices, double flat_tol)
    : verts_(vertices), flat_tol_(flat_tol) {
  for (int v = 0; v < 8; ++v)
    for (int k = 0; k < 3; ++k) verts_rat_[v][k] = rat_from(verts_[v][k]);
  init();
}

Hexahedron::Hexahedron(const std::array<RatVec3, 8>& vertices, double flat_tol)
    : verts_rat_(vertices), flat_tol_(flat_tol) {
  for (int v = 0; v < 8; ++v)
    for (int k = 0; k < 3; ++k) verts_[v][k] = to_double(verts_rat_[v][k]);
  init();
}

void Hexahedron::init() {
  for (int v = 0; v < 8; ++v)
    for (int w = v + 1; w < 8; ++w)
      diameter_ = std::max(diameter_, (verts_[v] - verts_[w]).norm());

  // Exact trilinear map: sum over vertices of vert * prod_k (bit ? x_k : 1-x_k).
  const MultiPoly one = MultiPoly::constant(Rat(1));
  std::array<std::array<MultiPoly, 2>, 3> blend;
  for (int k = 0; k < 3; ++k) {
    blend[k][1] = MultiPoly::var(k);
    blend[k][0] = one - blend[k][1];
  }
  for (int v = 0; v < 8; ++v) {
    MultiPoly wv = blend[0][v & 1] * blend[1][(v >> 1) & 1] * blend[2][(v >> 2) & 1];
    for (int k = 0; k < 3; ++k) F_[k] += wv.scaled(verts_rat_[v][k]);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) DF_[i][j] = F_[i].derivative(j);

  J_ = DF_[0][0] * (DF_[1][1] * DF_[2][2] - DF_[1][2] * DF_[2][1]) -
       DF_[0][1] * (DF_[1][0] * DF_[2][2] - DF_[1][2] * DF_[2][0]) +
       DF_[0][2] * (DF_[1][0] * DF_[2][1] - DF_[1][1] * DF_[2][0]);

  // Adjugate via the cyclic cofactor identity adj(A)_ij = A_{j+1,i+1}A_{j+2,i+2} - A_{j+1,i+2}A_{j+2,i+1}.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int j1 = (j + 1) % 3, j2 = (j + 2) % 3, i1 = (i + 1) % 3, i2 = (i + 2) % 3;
      adj_[i][j] = DF_[j1][i1] * DF_[j2][i2] - DF_[j1][i2] * DF_[j2][i1];
    }

  for (int k = 0; k < 3; ++k) F_flat_[k] = FlatPoly::from(F_[k]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) DF_flat_[i][j] = FlatPoly::from(DF_[i][j]);
  J_flat_ = FlatPoly::from(J_);

  build_faces();
  validate();
}

void Hexahedron::build_faces() {
  for (int f = 0; f < 6; ++f) {
    FaceData& fd = faces_[f];
    fd.index = f;
    fd.axis = f / 2;
    fd.odd = (f % 2) == 1;
    fd.ref_p = (fd.axis == 0) ? 1 : 0;
    fd.ref_q = (fd.axis == 2) ? 1 : 2;

    auto ci = face_corner_indices(f);
    const Vec3 &y0 = verts_[ci[0]], &y1 = verts_[ci[1]], &y2 = verts_[ci[2]];

    // Exact outward normal: +-(y1-y0)x(y2-y0), sign fixed by face parity and
    // the (p,q,axis) permutation parity.
    const int sign = (fd.odd ? 1 : -1) * (fd.axis == 1 ? -1 : 1);
    RatVec3 d1, d2;
    for (int k = 0; k < 3; ++k) {
      d1[k] = verts_rat_[ci[1]][k] - verts_rat_[ci[0]][k];
      d2[k] = verts_rat_[ci[2]][k] - verts_rat_[ci[0]][k];
    }
    RatVec3 cr{d1[1] * d2[2] - d1[2] * d2[1], d1[2] * d2[0] - d1[0] * d2[2],
               d1[0] * d2[1] - d1[1] * d2[0]};
    for (int k = 0; k < 3; ++k) fd.scaled_normal[k] = cr[k] * sign;

    Vec3 nd(to_double(fd.scaled_normal[0]), to_double(fd.scaled_normal[1]),
            to_double(fd.scaled_normal[2]));
    fd.normal_scale = nd.norm();
    if (fd.normal_scale == 0.0)
      throw DegenerateElement("face " + std::to_string(f) + " has a degenerate corner frame");
    fd.normal = nd / fd.normal_scale;

    // Scaled face Jacobian R = (dF/dp x dF/dq)|face . (cross of corner edges);
    // the two orientation signs cancel, so R = s*K > 0 on admissible cells.
    const int val = fd.odd ? 1 : 0;
    std::array<FacePoly, 3> tp, tq;
    for (int k = 0; k < 3; ++k) {
      tp[k] = restrict_to_face(DF_[k][fd.ref_p], fd.axis, val);
      tq[k] = restrict_to_face(DF_[k][fd.ref_q], fd.axis, val);
    }
    std::array<FacePoly, 3> cross{tp[1] * tq[2] - tp[2] * tq[1], tp[2] * tq[0] - tp[0] * tq[2],
                                  tp[0] * tq[1] - tp[1] * tq[0]};
    FacePoly R;
    for (int k = 0; k < 3; ++k) R += cross[k].scaled(cr[k]);
    fd.jac_scaled = R;
    fd.jac_flat = FlatPoly2::from(R);
    double inv_s = 1.0 / fd.normal_scale;
    for (auto& t : fd.jac_flat.terms) t.c *= inv_s;
    fd.jac_corners = {fd.jac_flat.eval(0, 0), fd.jac_flat.eval(1, 0), fd.jac_flat.eval(0, 1),
                      fd.jac_flat.eval(1, 1)};

    fd.area_scaled = R.integral_unit_square();
    fd.area = to_double(fd.area_scaled) / fd.normal_scale;

    for (int k = 0; k < 3; ++k) {
      FacePoly Fk = restrict_to_face(F_[k], fd.axis, val);
      fd.centroid_rat[k] = (Fk * R).integral_unit_square() / fd.area_scaled;
      fd.centroid[k] = to_double(fd.centroid_rat[k]);
    }

    // Local physical variables: omit the axis of the largest |normal|
    // component; on a tie, omit the larger index.
    std::array<Rat, 3> n2;
    for (int k = 0; k < 3; ++k) n2[k] = fd.scaled_normal[k] * fd.scaled_normal[k];
    int m = 0;
    for (int k = 1; k < 3; ++k)
      if (n2[k] >= n2[m]) m = k;
    fd.omitted = m;
    fd.loc_i = (m == 0) ? 1 : 0;
    fd.loc_j = (m == 2) ? 1 : 2;

    // Plane equation solved for the omitted variable.
    Rat nv0(0);
    for (int k = 0; k < 3; ++k) nv0 += fd.scaled_normal[k] * verts_rat_[ci[0]][k];
    fd.plane_t0 = nv0 / fd.scaled_normal[m];
    fd.plane_ti = -fd.scaled_normal[fd.loc_i] / fd.scaled_normal[m];
    fd.plane_tj = -fd.scaled_normal[fd.loc_j] / fd.scaled_normal[m];
  }
}

void Hexahedron::validate() {
  // Flatness: fourth corner against the plane of the first three.
  for (int f = 0; f < 6; ++f) {
    const FaceData& fd = faces_[f];
    auto ci = face_corner_indices(f);
    Vec3 d3 = verts_[ci[3]] - verts_[ci[0]];
    double dev = std::abs(d3.dot(fd.normal));
    double fdiam = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        fdiam = std::max(fdiam, (verts_[ci[a]] - verts_[ci[b]]).norm());
    if (dev > flat_tol_ * fdiam)
      throw NonFlatFace("face " + std::to_string(f) + " deviates from flat by " +
                        std::to_string(dev));
  }
  // Positive Jacobian at the corners and the center.
  for (int v = 0; v < 8; ++v) {
    Vec3 xh(v & 1, (v >> 1) & 1, (v >> 2) & 1);
    if (J_flat_.eval(xh[0], xh[1], xh[2]) <= 0)
      throw NonPositiveJacobian("det DF <= 0 at reference vertex " + std::to_string(v));
  }
  if (J_flat_.eval(0.5, 0.5, 0.5) <= 0)
    throw NonPositiveJacobian("det DF <= 0 at the reference centroid");
  // Positive face Jacobians at the face corners (bilinear => positive on the face).
  for (int f = 0; f < 6; ++f)
    for (double kc : faces_[f].jac_corners)
      if (kc <= 0)
        throw DegenerateElement("face Jacobian not positive on face " + std::to_string(f));
}

Vec3 Hexahedron::map(const Vec3& xhat) const { return trilinear_map(verts_, xhat); }

Mat3 Hexahedron::jacobian_matrix(const Vec3& xhat) const {
  Mat3 M;
  double xp[8], yp[8], zp[8];
  int d = 2;
  fill_pows(xhat[0], d, xp);
  fill_pows(xhat[1], d, yp);
  fill_pows(xhat[2], d, zp);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = DF_flat_[i][j].eval_pows(xp, yp, zp);
  return M;
}

double Hexahedron::jacobian_det(const Vec3& xhat) const {
  double j = J_flat_.eval(xhat[0], xhat[1], xhat[2]);
  if (j <= 0) throw NonPositiveJacobian("det DF <= 0 inside the element");
  return j;
}

Vec3 Hexahedron::piola(const Vec3& vhat, const Vec3& xhat) const {
  return jacobian_matrix(xhat) * vhat / jacobian_det(xhat);
}

Vec3 Hexahedron::inverse_map(const Vec3& x, double tol) const {
  Vec3 xh(0.5, 0.5, 0.5);
  double scale = 1.0 + diameter_;
  double res = (map(xh) - x).norm();
  for (int it = 0; it < 50; ++it) {
    if (res <= tol * scale) return xh;
    Vec3 r = x - map(xh);
    Vec3 dx = jacobian_matrix(xh).partialPivLu().solve(r);
    double step = 1.0;
    for (int h = 0; h < 12; ++h) {
      Vec3 cand = xh + step * dx;
      double cres = (map(cand) - x).norm();
      if (cres < res) {
        xh = cand;
        res = cres;
        break;
      }
      step *= 0.5;
    }
  }
  if (res <= tol * scale) return xh;
  throw NoConvergence("inverse_map failed to converge (point outside the element?)");
}

VectorPoly Hexahedron::pull_back(const VectorPoly& v_physical) const {
  std::array<MultiPoly, 3> vF;
  for (int k = 0; k < 3; ++k) vF[k] = v_physical[k].compose(F_);
  VectorPoly out;
  for (int i = 0; i < 3; ++i) {
    MultiPoly s;
    for (int j = 0; j < 3; ++j) s += adj_[i][j] * vF[j];
    out[i] = s;
  }
  return out;
}

MultiPoly Hexahedron::compose(const MultiPoly& p_physical) const { return p_physical.compose(F_); }

Vec3 Hexahedron::center() const {
  Vec3 c = Vec3::Zero();
  for (const Vec3& v : verts_) c += v;
  return c / 8.0;
}

Hexahedron unit_cube() {
  std::array<Vec3, 8> v;
  for (int i = 0; i < 8; ++i) v[i] = Vec3(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  return Hexahedron(v);
}

}  // namespace hexdiv
