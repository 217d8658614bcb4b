// SPDX-License-Identifier: Apache-2.0
#include "hexdiv/element.hpp"

#include <Eigen/SVD>
#include <cassert>
#include <cmath>

#include "hexdiv/quadrature.hpp"

namespace hexdiv {

const char* family_name(Family f) {
  switch (f) {
    case Family::AT0Simple: return "AT0";
    case Family::AT0General: return "AT0g";
    case Family::AT1: return "AT1";
    case Family::ATr: return "ATr";
    case Family::RT: return "RT";
    case Family::BDDF1: return "BDDF1";
  }
  return "?";
}

int face_space_dim(Family fam, int r) {
  switch (fam) {
    case Family::RT: return (r + 1) * (r + 1);
    case Family::BDDF1: return 3;
    default: return dim_P2(r);
  }
}

namespace {

int vol_quad_degree(int r) { return 2 * r + 6; }

/// Monomial exponent list for P_r on a face: (0,0) first, then by total degree.
std::vector<std::array<int, 2>> face_mono_list(int r) {
  std::vector<std::array<int, 2>> out;
  for (int d = 0; d <= r; ++d)
    for (int a = d; a >= 0; --a) out.push_back({a, d - a});
  return out;
}

}  // namespace

// --- FaceFrame ----------------------------------------------------------------

FaceFrame FaceFrame::from_corners(const std::array<Vec3, 4>& corners) {
  FaceFrame f;
  f.corners = corners;
  Vec3 n = (corners[1] - corners[0]).cross(corners[2] - corners[0]);
  f.normal = n.normalized();
  const QuadratureRule& q = gauss_rule(2, 4);
  double a = 0;
  Vec3 c = Vec3::Zero();
  for (std::size_t k = 0; k < q.size(); ++k) {
    double s = q.points[k][0], t = q.points[k][1];
    double K = f.jac(s, t);
    a += q.weights[k] * K;
    c += q.weights[k] * K * f.param_point(s, t);
  }
  f.area = a;
  f.centroid = c / a;
  // local variables by the max-|normal| rule; tie -> omit the larger index
  int m = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(f.normal[k]) >= std::abs(f.normal[m])) m = k;
  f.loc_i = (m == 0) ? 1 : 0;
  f.loc_j = (m == 2) ? 1 : 2;
  return f;
}

FaceFrame FaceFrame::from_face(const Hexahedron& hex, int face) {
  auto ci = face_corner_indices(face);
  std::array<Vec3, 4> corners{hex.vertex(ci[0]), hex.vertex(ci[1]), hex.vertex(ci[2]),
                              hex.vertex(ci[3])};
  FaceFrame f = FaceFrame::from_corners(corners);
  // keep the element's exact data where available
  const FaceData& fd = hex.face(face);
  f.area = fd.area;
  f.centroid = fd.centroid;
  f.loc_i = fd.loc_i;
  f.loc_j = fd.loc_j;
  return f;
}

Vec3 FaceFrame::param_point(double s, double t) const {
  return corners[0] * (1 - s) * (1 - t) + corners[1] * s * (1 - t) + corners[2] * (1 - s) * t +
         corners[3] * s * t;
}

double FaceFrame::jac(double s, double t) const {
  Vec3 ds = (corners[1] - corners[0]) * (1 - t) + (corners[3] - corners[2]) * t;
  Vec3 dt = (corners[2] - corners[0]) * (1 - s) + (corners[3] - corners[1]) * s;
  return ds.cross(dt).norm();
}

std::pair<double, double> FaceFrame::param_of(const Vec3& x) const {
  double s = 0.5, t = 0.5;
  for (int it = 0; it < 40; ++it) {
    Vec3 r = param_point(s, t) - x;
    Vec3 ds = (corners[1] - corners[0]) * (1 - t) + (corners[3] - corners[2]) * t;
    Vec3 dt = (corners[2] - corners[0]) * (1 - s) + (corners[3] - corners[1]) * s;
    double a11 = ds.dot(ds), a12 = ds.dot(dt), a22 = dt.dot(dt);
    double b1 = ds.dot(r), b2 = dt.dot(r);
    double det = a11 * a22 - a12 * a12;
    double du = (a22 * b1 - a12 * b2) / det;
    double dv = (a11 * b2 - a12 * b1) / det;
    s -= du;
    t -= dv;
    if (std::abs(du) + std::abs(dv) < 1e-14) break;
  }
  return {s, t};
}

// --- MultiplierBasis ------------------------------------------------------------

MultiplierBasis::MultiplierBasis(Family fam, int r, FaceFrame frame)
    : fam_(fam), r_(r), frame_(std::move(frame)) {
  if (fam == Family::RT) {
    count_ = (r + 1) * (r + 1);
    return;
  }
  int deg = (fam == Family::BDDF1) ? 1 : r;
  powers_ = face_mono_list(deg);
  count_ = static_cast<int>(powers_.size());
  means_.assign(count_, 0.0);
  const QuadratureRule& q = gauss_rule(2, 2 * deg + 2);
  double area = 0;
  std::vector<double> acc(count_, 0.0);
  for (std::size_t k = 0; k < q.size(); ++k) {
    double s = q.points[k][0], t = q.points[k][1];
    double K = frame_.jac(s, t);
    Vec3 x = frame_.param_point(s, t);
    double xi = x[frame_.loc_i] - frame_.centroid[frame_.loc_i];
    double xj = x[frame_.loc_j] - frame_.centroid[frame_.loc_j];
    area += q.weights[k] * K;
    for (int b = 0; b < count_; ++b)
      acc[b] += q.weights[k] * K * std::pow(xi, powers_[b][0]) * std::pow(xj, powers_[b][1]);
  }
  for (int b = 0; b < count_; ++b) means_[b] = acc[b] / area;
  means_[0] = 0.0;  // the constant 1 itself
}

double MultiplierBasis::eval_phys(int k, const Vec3& x) const {
  if (fam_ == Family::RT) {
    auto [s, t] = frame_.param_of(x);
    return eval_param(k, s, t);
  }
  if (k == 0) return 1.0;
  double xi = x[frame_.loc_i] - frame_.centroid[frame_.loc_i];
  double xj = x[frame_.loc_j] - frame_.centroid[frame_.loc_j];
  return std::pow(xi, powers_[k][0]) * std::pow(xj, powers_[k][1]) - means_[k];
}

double MultiplierBasis::eval_param(int k, double s, double t) const {
  if (fam_ == Family::RT) {
    int a = k % (r_ + 1), b = k / (r_ + 1);
    return std::pow(s - 0.5, a) * std::pow(t - 0.5, b);
  }
  return eval_phys(k, frame_.param_point(s, t));
}

// --- affine normalization and the geometry report -------------------------------

AffineNormalization affine_normalize(const Hexahedron& hex) {
  AffineNormalization an;
  an.shift = hex.vertex(0);
  an.L.col(0) = hex.vertex(1) - hex.vertex(0);
  an.L.col(1) = hex.vertex(2) - hex.vertex(0);
  an.L.col(2) = hex.vertex(4) - hex.vertex(0);

  const auto& vr = hex.vertices_rat();
  std::array<std::array<Rat, 3>, 3> Lr;
  for (int i = 0; i < 3; ++i) {
    Lr[i][0] = vr[1][i] - vr[0][i];
    Lr[i][1] = vr[2][i] - vr[0][i];
    Lr[i][2] = vr[4][i] - vr[0][i];
  }
  Rat det = Lr[0][0] * (Lr[1][1] * Lr[2][2] - Lr[1][2] * Lr[2][1]) -
            Lr[0][1] * (Lr[1][0] * Lr[2][2] - Lr[1][2] * Lr[2][0]) +
            Lr[0][2] * (Lr[1][0] * Lr[2][1] - Lr[1][1] * Lr[2][0]);
  if (det == 0) throw DegenerateCorner("corner edge vectors are linearly dependent");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      an.Linv_rows_rat[i][j] = (Lr[j1][i1] * Lr[j2][i2] - Lr[j1][i2] * Lr[j2][i1]) / det;
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) an.Linv(i, j) = to_double(an.Linv_rows_rat[i][j]);

  for (int v = 0; v < 8; ++v) {
    RatVec3 d;
    for (int k = 0; k < 3; ++k) d[k] = vr[v][k] - vr[0][k];
    for (int i = 0; i < 3; ++i) {
      Rat s(0);
      for (int k = 0; k < 3; ++k) s += an.Linv_rows_rat[i][k] * d[k];
      an.normalized_vertices[v][i] = to_double(s);
    }
  }
  return an;
}

GeometryReport geometry_report(const Hexahedron& hex, double det_threshold) {
  AffineNormalization an = affine_normalize(hex);
  Hexahedron tilde(an.normalized_vertices);

  GeometryReport rep;
  for (int c = 0; c < 3; ++c) {
    rep.H.col(c) = tilde.face(2 * c + 1).normal;
    rep.C.col(c) = tilde.face(2 * c + 1).centroid;
  }
  rep.CH = rep.C.cwiseProduct(rep.H);
  for (int k = 0; k < 3; ++k) rep.minors1[k] = rep.H(k, k);
  rep.minors2[0] = rep.H(0, 0) * rep.H(1, 1) - rep.H(0, 1) * rep.H(1, 0);
  rep.minors2[1] = rep.H(0, 0) * rep.H(2, 2) - rep.H(0, 2) * rep.H(2, 0);
  rep.minors2[2] = rep.H(1, 1) * rep.H(2, 2) - rep.H(1, 2) * rep.H(2, 1);
  rep.detH = rep.H.determinant();
  rep.det_CH = rep.CH.determinant();
  rep.ch_scale = rep.CH.row(0).norm() * rep.CH.row(1).norm() * rep.CH.row(2).norm();
  Eigen::JacobiSVD<Mat3> svd(rep.CH);
  rep.cond_CH = svd.singularValues()(0) / std::max(svd.singularValues()(2), 1e-300);

  const double ptol = 1.0 - 1e-12;
  for (int k = 0; k < 3; ++k)
    if (std::abs(hex.face(2 * k).normal.dot(hex.face(2 * k + 1).normal)) > ptol)
      rep.parallel_pairs++;

  // four parallel edges along one reference axis
  static const int edges[3][4][2] = {{{0, 1}, {2, 3}, {4, 5}, {6, 7}},
                                     {{0, 2}, {1, 3}, {4, 6}, {5, 7}},
                                     {{0, 4}, {1, 5}, {2, 6}, {3, 7}}};
  for (int axis = 0; axis < 3 && !rep.truncated_pillar; ++axis) {
    std::array<Vec3, 4> dir;
    for (int e = 0; e < 4; ++e)
      dir[e] = (hex.vertex(edges[axis][e][1]) - hex.vertex(edges[axis][e][0])).normalized();
    bool all = true;
    for (int a = 0; a < 4 && all; ++a)
      for (int b = a + 1; b < 4 && all; ++b)
        if (std::abs(dir[a].dot(dir[b])) <= ptol) all = false;
    if (all) rep.truncated_pillar = true;
  }

  rep.symmetric_recommended = std::abs(rep.det_CH) > det_threshold * std::max(rep.ch_scale, 1e-300);
  return rep;
}

// --- DOF application -------------------------------------------------------------

double apply_dof(const ElementSpace& space, const Hexahedron& hex, const Dof& dof,
                 const ElementFunction& v) {
  const int deg = vol_quad_degree(space.r);
  switch (dof.kind) {
    case Dof::Kind::Flux: {
      const QuadratureRule& q = gauss_rule(2, deg);
      const MultiplierBasis& mb = space.face_basis[dof.face];
      double sum = 0;
      for (std::size_t k = 0; k < q.size(); ++k) {
        double s = q.points[k][0], t = q.points[k][1];
        sum += q.weights[k] * v.trace_ref(dof.face, s, t) * mb.eval_param(dof.k, s, t);
      }
      return sum;
    }
    case Dof::Kind::Div: {
      const QuadratureRule& q = gauss_rule(3, deg);
      double sum = 0;
      for (std::size_t k = 0; k < q.size(); ++k) {
        Vec3 xh(q.points[k][0], q.points[k][1], q.points[k][2]);
        Vec3 x = hex.map(xh);
        sum += q.weights[k] * v.div_ref(xh) * space.wstar[dof.k].eval(x[0], x[1], x[2]);
      }
      return sum;
    }
    case Dof::Kind::Interior: {
      const QuadratureRule& q = gauss_rule(3, deg);
      const FlatVectorPoly& w = space.interior_moments[dof.k];
      double sum = 0;
      for (std::size_t k = 0; k < q.size(); ++k) {
        Vec3 xh(q.points[k][0], q.points[k][1], q.points[k][2]);
        Vec3 vv = v.value_ref(xh);
        sum += q.weights[k] * (vv[0] * w.comp[0].eval(xh[0], xh[1], xh[2]) +
                               vv[1] * w.comp[1].eval(xh[0], xh[1], xh[2]) +
                               vv[2] * w.comp[2].eval(xh[0], xh[1], xh[2]));
      }
      return sum;
    }
    case Dof::Kind::Bubble: {
      const QuadratureRule& q = gauss_rule(3, deg);
      const ElementFunction& b = space.basis[space.bubble_index[dof.k]];
      double sum = 0;
      for (std::size_t k = 0; k < q.size(); ++k) {
        Vec3 xh(q.points[k][0], q.points[k][1], q.points[k][2]);
        Mat3 DF = hex.jacobian_matrix(xh);
        double J = hex.jacobian_det(xh);
        sum += q.weights[k] * (DF * v.value_ref(xh)).dot(DF * b.value_ref(xh)) / J;
      }
      return sum;
    }
  }
  return 0;
}

double apply_dof_field(const ElementSpace& space, const Hexahedron& hex, const Dof& dof,
                       const VectorField& v) {
  // generous order: the field is typically transcendental and the projection
  // tests require near-exact DOF values
  const int deg = vol_quad_degree(space.r) + 8;
  switch (dof.kind) {
    case Dof::Kind::Flux: {
      const QuadratureRule& q = gauss_rule(2, deg);
      const FaceData& fd = hex.face(dof.face);
      const MultiplierBasis& mb = space.face_basis[dof.face];
      double sum = 0;
      for (std::size_t k = 0; k < q.size(); ++k) {
        double s = q.points[k][0], t = q.points[k][1];
        Vec3 xh;
        xh[fd.axis] = fd.odd ? 1.0 : 0.0;
        xh[fd.ref_p] = s;
        xh[fd.ref_q] = t;
        Vec3 x = hex.map(xh);
        double K = fd.jac_flat.eval(s, t);
        sum += q.weights[k] * v.value(x).dot(fd.normal) * mb.eval_param(dof.k, s, t) * K;
      }
      return sum;
    }
    case Dof::Kind::Div: {
      const QuadratureRule& q = gauss_rule(3, deg);
      double sum = 0;
      for (std::size_t k = 0; k < q.size(); ++k) {
        Vec3 xh(q.points[k][0], q.points[k][1], q.points[k][2]);
        Vec3 x = hex.map(xh);
        sum += q.weights[k] * v.divergence(x) * space.wstar[dof.k].eval(x[0], x[1], x[2]) *
               hex.jacobian_det(xh);
      }
      return sum;
    }
    case Dof::Kind::Interior: {
      const QuadratureRule& q = gauss_rule(3, deg);
      const FlatVectorPoly& w = space.interior_moments[dof.k];
      double sum = 0;
      for (std::size_t k = 0; k < q.size(); ++k) {
        Vec3 xh(q.points[k][0], q.points[k][1], q.points[k][2]);
        Mat3 DF = hex.jacobian_matrix(xh);
        double J = hex.jacobian_det(xh);
        Vec3 vhat = J * DF.inverse() * v.value(hex.map(xh));
        Vec3 wv(w.comp[0].eval(xh[0], xh[1], xh[2]), w.comp[1].eval(xh[0], xh[1], xh[2]),
                w.comp[2].eval(xh[0], xh[1], xh[2]));
        sum += q.weights[k] * vhat.dot(wv);
      }
      return sum;
    }
    case Dof::Kind::Bubble: {
      const QuadratureRule& q = gauss_rule(3, deg);
      const ElementFunction& b = space.basis[space.bubble_index[dof.k]];
      double sum = 0;
      for (std::size_t k = 0; k < q.size(); ++k) {
        Vec3 xh(q.points[k][0], q.points[k][1], q.points[k][2]);
        Mat3 DF = hex.jacobian_matrix(xh);
        sum += q.weights[k] * v.value(hex.map(xh)).dot(DF * b.value_ref(xh));
      }
      return sum;
    }
  }
  return 0;
}

// --- shared assembly of the DOF and flux matrices --------------------------------

namespace {

ElementFunction pulled_back(const Hexahedron& hex, const VectorPoly& v_phys, std::string tag) {
  ElementFunction fn;
  fn.add(1.0, make_ref_function(hex.pull_back(v_phys), tag));
  fn.set_tag(std::move(tag));
  return fn;
}

VectorPoly x_minus(const Hexahedron& hex, int vertex) {
  VectorPoly v;
  for (int k = 0; k < 3; ++k)
    v[k] = MultiPoly::var(k) - MultiPoly::constant(hex.vertices_rat()[vertex][k]);
  return v;
}

void finalize_space(ElementSpace& space, const Hexahedron& hex) {
  for (ElementFunction& f : space.basis) f.finalize();

  space.face_basis.clear();
  for (int f = 0; f < 6; ++f)
    space.face_basis.emplace_back(space.family, space.r, FaceFrame::from_face(hex, f));

  const int n = space.dim();
  if (static_cast<int>(space.dofs.size()) != n)
    throw ElementBuildFailure("DOF count does not match the space dimension");

  space.dof_matrix.resize(n, n);
  for (int d = 0; d < n; ++d)
    for (int j = 0; j < n; ++j)
      space.dof_matrix(d, j) = apply_dof(space, hex, space.dofs[d], space.basis[j]);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(space.dof_matrix);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(n - 1);
  if (!(smin > 1e-12 * smax))
    throw SingularDofMatrix(std::string(family_name(space.family)) +
                            ": DOF matrix numerically singular");
  space.dof_condition = smax / smin;

  // flux matrix: expansion of each basis trace in the face multiplier basis
  // (Gram solve per face with the K-weighted face measure)
  int total = 0;
  for (int f = 0; f < 6; ++f) total += space.face_basis[f].count();
  space.flux_matrix.resize(n, total);
  const QuadratureRule& q = gauss_rule(2, vol_quad_degree(space.r) + 2);
  int col0 = 0;
  for (int f = 0; f < 6; ++f) {
    const MultiplierBasis& mb = space.face_basis[f];
    const FaceData& fd = hex.face(f);
    const int m = mb.count();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, n);
    for (std::size_t k = 0; k < q.size(); ++k) {
      double s = q.points[k][0], t = q.points[k][1];
      double K = fd.jac_flat.eval(s, t);
      Eigen::VectorXd mu(m);
      for (int a = 0; a < m; ++a) mu(a) = mb.eval_param(a, s, t);
      G += q.weights[k] * K * mu * mu.transpose();
      for (int j = 0; j < n; ++j) {
        double tr = space.basis[j].trace_ref(f, s, t);  // = K * (v . nu)
        rhs.col(j) += q.weights[k] * tr * mu;
      }
    }
    Eigen::MatrixXd coef = G.ldlt().solve(rhs);
    space.flux_matrix.block(0, col0, n, m) = coef.transpose();
    col0 += m;
  }
}

}  // namespace

int at_dim(int r, bool reduced) {
  if (reduced) return (r + 1) * (r + 2) * (r + 3) / 2 + 3 * (r + 1);
  int poly = (r + 1) * (r + 2) * (r + 4) / 2;
  return poly + (r == 0 ? 2 : 3 * (r + 1));
}

int rt_dim(int r) { return 3 * (r + 2) * (r + 1) * (r + 1); }

// --- AT0, simple supplemental space ----------------------------------------------

ElementSpace build_AT0_simple(const Hexahedron& hex) {
  ElementSpace sp;
  sp.family = Family::AT0Simple;
  sp.r = 0;

  SupplementFactory fac(hex);
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 1), "x-x124"));
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 2), "x-x034"));
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 4), "x-x025"));
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 0), "x-x024"));
  sp.basis.push_back(fac.supplement_pair(1, 3));
  sp.basis.push_back(fac.supplement_pair(3, 5));

  for (int f = 0; f < 6; ++f) sp.dofs.push_back({Dof::Kind::Flux, f, 0});

  // closed-form shape functions (cross-checked against the numeric
  // inversion in the test suite)
  const Vec3 x024 = hex.vertex(0);
  double alpha = (hex.vertex(1) - x024).dot(hex.face(1).normal);
  double beta = (hex.vertex(2) - x024).dot(hex.face(3).normal);
  double gamma = (hex.vertex(4) - x024).dot(hex.face(5).normal);
  double a1 = hex.face(1).area, a3 = hex.face(3).area, a5 = hex.face(5).area;
  double D = a1 * alpha + a3 * beta + a5 * gamma;
  if (D <= 0) throw DegenerateElement("AT0: nonpositive flux normalization");

  ElementFunction phi1, phi3, phi5;
  phi1.add_scaled(a1 / D, sp.basis[3]);
  phi1.add_scaled(a1 * (a3 * beta + a5 * gamma) / D, sp.basis[4]);
  phi1.add_scaled(a1 * a5 * gamma / D, sp.basis[5]);
  phi3.add_scaled(a3 / D, sp.basis[3]);
  phi3.add_scaled(-a3 * a1 * alpha / D, sp.basis[4]);
  phi3.add_scaled(a3 * a5 * gamma / D, sp.basis[5]);
  phi5.add_scaled(a5 / D, sp.basis[3]);
  phi5.add_scaled(-a5 * a1 * alpha / D, sp.basis[4]);
  phi5.add_scaled(-a5 * (a1 * alpha + a3 * beta) / D, sp.basis[5]);

  auto even_shape = [&](int fa, int fb, int f_even) {
    Vec3 w = hex.face(fa).normal.cross(hex.face(fb).normal);
    double den = w.dot(hex.face(f_even).normal);
    if (std::abs(den) < 1e-14) throw DegenerateElement("AT0: degenerate normal triple");
    // represent the constant field w in the polynomial members:
    // w = sum c_j (x - v_j) requires sum c_j = 0 and -sum c_j v_j = w.
    Eigen::Matrix4d A;
    Eigen::Vector4d rhsv;
    for (int k = 0; k < 3; ++k) {
      A(k, 0) = -hex.vertex(1)[k];
      A(k, 1) = -hex.vertex(2)[k];
      A(k, 2) = -hex.vertex(4)[k];
      A(k, 3) = -hex.vertex(0)[k];
      rhsv(k) = w[k];
    }
    A.row(3).setOnes();
    rhsv(3) = 0;
    Eigen::Vector4d c = A.partialPivLu().solve(rhsv);
    ElementFunction out;
    for (int j = 0; j < 4; ++j) out.add_scaled(c(j) / den, sp.basis[j]);
    out.add_scaled(-w.dot(hex.face(1).normal) / den, phi1);
    out.add_scaled(-w.dot(hex.face(3).normal) / den, phi3);
    out.add_scaled(-w.dot(hex.face(5).normal) / den, phi5);
    return out;
  };
  ElementFunction phi0 = even_shape(2, 4, 0);
  ElementFunction phi2 = even_shape(0, 4, 2);
  ElementFunction phi4 = even_shape(0, 2, 4);
  sp.shape = {phi0, phi1, phi2, phi3, phi4, phi5};
  for (ElementFunction& s : sp.shape) s.finalize();

  finalize_space(sp, hex);
  assert(sp.dim() == at_dim(0, false));
  return sp;
}

// --- AT0, general supplemental space ----------------------------------------------

namespace {

// Least-squares realization of a constant-per-face flux vector (orthogonal to
// the area vector) in the chained pair-supplement basis; exactly divergence
// free by construction.
ElementFunction realize_constant_fluxes(SupplementFactory& fac, const Eigen::VectorXd& beta_faces) {
  static const int chain[5][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}};
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(6, 5);
  for (int k = 0; k < 5; ++k) {
    P(chain[k][0], k) = 1.0 / fac.hex().face(chain[k][0]).area;
    P(chain[k][1], k) = -1.0 / fac.hex().face(chain[k][1]).area;
  }
  Eigen::VectorXd mu = P.colPivHouseholderQr().solve(beta_faces);
  ElementFunction out;
  for (int k = 0; k < 5; ++k)
    if (mu(k) != 0.0) out.add_scaled(mu(k), fac.supplement_pair(chain[k][0], chain[k][1]));
  return out;
}

}  // namespace

ElementSpace build_AT0_general(const Hexahedron& hex) {
  ElementSpace sp;
  sp.family = Family::AT0General;
  sp.r = 0;

  SupplementFactory fac(hex);
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 1), "x-x124"));
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 2), "x-x034"));
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 4), "x-x025"));
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 0), "x-x024"));

  // flux matrix of the polynomial part in column order (f0,f2,f4,f1,f3,f5)
  static const int col_face[6] = {0, 2, 4, 1, 3, 5};
  static const int vtx_of_row[4] = {1, 2, 4, 0};
  Eigen::MatrixXd M(4, 6);
  for (int row = 0; row < 4; ++row)
    for (int c = 0; c < 6; ++c) {
      int f = col_face[c];
      auto ci = face_corner_indices(f);
      M(row, c) = (hex.vertex(ci[0]) - hex.vertex(vtx_of_row[row])).dot(hex.face(f).normal);
      if (std::abs(M(row, c)) < 1e-13 * hex.diameter()) M(row, c) = 0.0;
    }
  const double a1 = M(0, 0), b1 = M(0, 4), c1 = M(0, 5);
  const double b2 = M(1, 1), a2 = M(1, 3), c2 = M(1, 5);
  const double c3 = M(2, 2), a3 = M(2, 3), b3 = M(2, 4);
  const double al = M(3, 3), be = M(3, 4), ga = M(3, 5);
  if (a1 <= 0 || b2 <= 0 || c3 <= 0 || al <= 0 || be <= 0 || ga <= 0)
    throw RankDeficiency("AT0 general: unexpected flux signs (degenerate geometry)");

  Eigen::MatrixXd N(2, 6);
  N << al * b1 / a1, -be * a2 / b2, (al * b3 - be * a3) / c3, be, -al, 0,
      (be * c1 - ga * b1) / a1, be * c2 / b2, -ga * b3 / c3, 0, ga, -be;

  Eigen::VectorXd phi(6);
  for (int c = 0; c < 6; ++c) phi(c) = hex.face(col_face[c]).area;
  Eigen::MatrixXd S =
      N * (Eigen::MatrixXd::Identity(6, 6) - phi * phi.transpose() / phi.squaredNorm());

  for (int srow = 0; srow < 2; ++srow) {
    Eigen::VectorXd beta(6);
    for (int c = 0; c < 6; ++c) beta(col_face[c]) = S(srow, c);
    ElementFunction s = realize_constant_fluxes(fac, beta);
    s.set_tag("sigma_general_" + std::to_string(srow));
    sp.basis.push_back(std::move(s));
  }
  sp.M024135 = M;
  sp.N024135 = N;
  sp.S024135 = S;

  for (int f = 0; f < 6; ++f) sp.dofs.push_back({Dof::Kind::Flux, f, 0});
  finalize_space(sp, hex);
  return sp;
}

bool lemma51_check(const Eigen::MatrixXd& M, const Eigen::MatrixXd& N, const Eigen::VectorXd& phi,
                   double rel_tol) {
  Eigen::MatrixXd S =
      N * (Eigen::MatrixXd::Identity(phi.size(), phi.size()) -
           phi * phi.transpose() / phi.squaredNorm());
  Eigen::MatrixXd stacked(M.rows() + S.rows(), M.cols());
  stacked << M, S;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > rel_tol * sv(0);
}

// --- AT1 -----------------------------------------------------------------------

namespace {

MultiPoly linear_form(const RatVec3& n, const RatVec3& x0) {
  // -(x - x0) . n, with an unnormalized (exact) normal
  MultiPoly p = MultiPoly::constant(n[0] * x0[0] + n[1] * x0[1] + n[2] * x0[2]);
  for (int k = 0; k < 3; ++k) p -= MultiPoly::var(k).scaled(n[k]);
  return p;
}

VectorPoly curl_lln(const MultiPoly& la, const MultiPoly& lb, const RatVec3& n) {
  MultiPoly prod = la * lb;
  VectorPoly w;
  for (int k = 0; k < 3; ++k) w[k] = prod.scaled(n[k]);
  return w.curl();
}

}  // namespace

double at1_nonsym_d(const Hexahedron& tilde, double s, double t) {
  auto nu = [&](int f, int k) { return tilde.face(f).normal[k]; };
  auto cc = [&](int f, int k) { return tilde.face(f).centroid[k]; };
  double f1 = tilde.face(1).area, f3 = tilde.face(3).area, f5 = tilde.face(5).area;
  double m00 = cc(1, 0) * nu(1, 0) + nu(5, 0) * (f5 * cc(5, 0) - t) / f1;
  double m01 = cc(3, 0) * nu(3, 0) + t * nu(5, 0) / f3;
  double m10 = cc(1, 1) * nu(1, 1) + s * nu(5, 1) / f1;
  double m11 = cc(3, 1) * nu(3, 1) + nu(5, 1) * (f5 * cc(5, 1) - s) / f3;
  return m00 * m11 - m01 * m10;
}

ElementSpace build_AT1(const Hexahedron& hex, AT1Mode mode, bool reduced) {
  ElementSpace sp;
  sp.family = Family::AT1;
  sp.r = 1;
  sp.reduced = reduced;
  sp.report = geometry_report(hex);

  AT1Mode use = mode;
  if (mode == AT1Mode::Auto)
    use = sp.report->symmetric_recommended ? AT1Mode::Symmetric : AT1Mode::NonSymmetric;
  if (use == AT1Mode::Symmetric && !sp.report->symmetric_recommended)
    throw SingularCnuMatrix(
        "AT1 symmetric supplements requested but det(C o H) is not safely nonzero");
  sp.at1_mode_used = use;

  // corner-plane linear functions with exact (unnormalized) normals
  const auto& vr = hex.vertices_rat();
  std::array<MultiPoly, 7> lam;
  std::array<RatVec3, 7> nn;
  for (int f = 0; f < 6; ++f) {
    nn[f] = hex.face(f).scaled_normal;
    lam[f] = linear_form(nn[f], vr[face_corner_indices(f)[0]]);
  }
  {
    RatVec3 d1, d2;
    for (int k = 0; k < 3; ++k) {
      d1[k] = vr[2][k] - vr[1][k];  // x034 - x124
      d2[k] = vr[4][k] - vr[1][k];  // x025 - x124
    }
    RatVec3 c{d1[1] * d2[2] - d1[2] * d2[1], d1[2] * d2[0] - d1[0] * d2[2],
              d1[0] * d2[1] - d1[1] * d2[0]};
    Rat side(0);  // orient into the tetrahedron (towards x024)
    for (int k = 0; k < 3; ++k) side += c[k] * (vr[0][k] - vr[1][k]);
    if (side < 0)
      for (int k = 0; k < 3; ++k) c[k] = -c[k];
    nn[6] = c;
    lam[6] = linear_form(nn[6], vr[1]);
  }

  // polynomial part: psi_0..psi_8 set the fluxes of faces 0, 2, 4
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 1), "psi0"));
  sp.basis.push_back(pulled_back(hex, curl_lln(lam[2], lam[6], nn[4]), "psi1"));
  sp.basis.push_back(pulled_back(hex, curl_lln(lam[4], lam[6], nn[2]), "psi2"));
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 2), "psi3"));
  sp.basis.push_back(pulled_back(hex, curl_lln(lam[0], lam[6], nn[4]), "psi4"));
  sp.basis.push_back(pulled_back(hex, curl_lln(lam[4], lam[6], nn[0]), "psi5"));
  sp.basis.push_back(pulled_back(hex, x_minus(hex, 4), "psi6"));
  sp.basis.push_back(pulled_back(hex, curl_lln(lam[0], lam[6], nn[2]), "psi7"));
  sp.basis.push_back(pulled_back(hex, curl_lln(lam[2], lam[6], nn[0]), "psi8"));

  // psi9*..psi11*: affine images of xtilde_l e_l; no flux on faces 0, 2, 4
  AffineNormalization an = affine_normalize(hex);
  for (int l = 0; l < 3; ++l) {
    MultiPoly xt;
    for (int k = 0; k < 3; ++k)
      xt += (MultiPoly::var(k) - MultiPoly::constant(vr[0][k])).scaled(an.Linv_rows_rat[l][k]);
    VectorPoly w;
    RatVec3 col;
    int corner = (l == 0) ? 1 : (l == 1 ? 2 : 4);
    for (int k = 0; k < 3; ++k) col[k] = vr[corner][k] - vr[0][k];
    for (int k = 0; k < 3; ++k) w[k] = xt.scaled(col[k]);
    sp.basis.push_back(pulled_back(hex, w, "psi" + std::to_string(9 + l) + "*"));
  }

  // supplements realizing the symmetric / non-symmetric flux tables in the
  // normalized element's variables
  SupplementFactory fac(hex);
  Hexahedron tilde(an.normalized_vertices);
  auto aff = [&](int face, int l) { return fac.supplement_affine(face, an.Linv_rows_rat[l]); };
  ElementFunction s0 = aff(1, 1), s1 = aff(1, 2), s2 = aff(3, 0), s3 = aff(3, 2);
  ElementFunction s4, s5;
  if (use == AT1Mode::Symmetric) {
    s4 = aff(5, 0);
    s5 = aff(5, 1);
  } else {
    double q = tilde.face(5).area * tilde.face(5).centroid[1];
    double best_d = 0, bs = 0, bt = 0, scale = 0;
    for (auto [ps, pt] : {std::pair{0.0, 0.0}, {q, 0.0}, {0.0, q}, {q, q}}) {
      double d = at1_nonsym_d(tilde, ps, pt);
      scale = std::max(scale, std::abs(d));
      if (std::abs(d) > std::abs(best_d)) {
        best_d = d;
        bs = ps;
        bt = pt;
      }
    }
    if (!(std::abs(best_d) > 1e-14 * std::max(1.0, scale)))
      throw SupplementSelectionFailed("AT1 non-symmetric: d(s,t) vanished at all probes");
    sp.at1_s = bs;
    sp.at1_t = bt;
    double ratio = hex.face(5).area / tilde.face(5).area;
    s4 = aff(5, 0);
    s4.add_scaled(hex.face(5).area * tilde.face(5).centroid[0], fac.supplement_pair(5, 1));
    s4.add_scaled(bt * ratio, fac.supplement_pair(1, 3));
    s5 = aff(5, 1);
    s5.add_scaled(hex.face(5).area * tilde.face(5).centroid[1], fac.supplement_pair(5, 3));
    s5.add_scaled(bs * ratio, fac.supplement_pair(3, 1));
  }
  int tagi = 0;
  for (ElementFunction* s : {&s0, &s1, &s2, &s3, &s4, &s5})
    s->set_tag("sigma" + std::to_string(tagi++));
  sp.basis.push_back(std::move(s0));
  sp.basis.push_back(std::move(s1));
  sp.basis.push_back(std::move(s2));
  sp.basis.push_back(std::move(s3));
  sp.basis.push_back(std::move(s4));
  sp.basis.push_back(std::move(s5));

  if (!reduced) {
    for (int l = 0; l < 3; ++l) {
      VectorPoly w;
      for (int k = 0; k < 3; ++k) w[k] = MultiPoly::var(k) * MultiPoly::var(l);
      sp.basis.push_back(pulled_back(hex, w, "x*x" + std::to_string(l + 1)));
    }
  }

  // W and the divergence-DOF test set
  Vec3 c = hex.center();
  sp.w_basis.push_back(FlatPoly::from(MultiPoly::constant(Rat(1))));
  if (!reduced) {
    for (int k = 0; k < 3; ++k) {
      MultiPoly w = MultiPoly::var(k) - MultiPoly::constant(rat_from(c[k]));
      sp.w_basis.push_back(FlatPoly::from(w));
      sp.wstar.push_back(FlatPoly::from(w));
    }
  }

  for (int f = 0; f < 6; ++f)
    for (int k = 0; k < 3; ++k) sp.dofs.push_back({Dof::Kind::Flux, f, k});
  for (int k = 0; k < static_cast<int>(sp.wstar.size()); ++k)
    sp.dofs.push_back({Dof::Kind::Div, -1, k});

  finalize_space(sp, hex);
  assert(sp.dim() == at_dim(1, reduced));
  return sp;
}

// --- general r -------------------------------------------------------------------

namespace {

// Bivariate expansion of the physical normal trace of a rational physical
// polynomial field on a flat face, over the local monomials.
std::map<Exps2, double> physical_trace_coeffs(const Hexahedron& hex, const VectorPoly& v_phys,
                                              int face) {
  const FaceData& fd = hex.face(face);
  std::array<MultiPoly, 3> args{MultiPoly::var(0), MultiPoly::var(1), MultiPoly::var(2)};
  args[fd.omitted] = MultiPoly::constant(fd.plane_t0) +
                     MultiPoly::var(fd.loc_i).scaled(fd.plane_ti) +
                     MultiPoly::var(fd.loc_j).scaled(fd.plane_tj);
  std::map<Exps2, double> out;
  for (int k = 0; k < 3; ++k) {
    MultiPoly restr = v_phys[k].compose(args);
    for (const auto& [e, cf] : restr.terms()) {
      assert(e[fd.omitted] == 0);
      Exps2 key{e[fd.loc_i], e[fd.loc_j]};
      out[key] += to_double(cf) * fd.normal[k];
    }
  }
  return out;
}

}  // namespace

ElementSpace build_general_r(const Hexahedron& hex, int r, bool reduced) {
  if (r < 0 || r > 2) throw ElementBuildFailure("general-r construction supports 0 <= r <= 2");
  if (reduced && r < 1) throw ElementBuildFailure("reduced spaces require r >= 1");
  ElementSpace sp;
  sp.family = Family::ATr;
  sp.r = r;
  sp.reduced = reduced;

  // constant-divergence polynomial part driving the flux analysis
  std::vector<VectorPoly> cd = basis_curl_P(r + 1);
  {
    VectorPoly x;
    for (int k = 0; k < 3; ++k) x[k] = MultiPoly::var(k);
    cd.push_back(x);
  }
  const int n = static_cast<int>(cd.size());
  if (n != dim_curl_plus_x(r)) throw ElementBuildFailure("unexpected Curl P^3 + xP0 dimension");

  const auto monos = face_mono_list(r);
  const int mper = static_cast<int>(monos.size());
  const int F = 6 * mper;

  std::array<std::vector<double>, 6> means;
  for (int f = 0; f < 6; ++f) {
    means[f].assign(mper, 0.0);
    for (int k = 1; k < mper; ++k)
      means[f][k] = to_double(face_monomial_average(hex, f, monos[k][0], monos[k][1]));
  }

  auto flux_row = [&](const VectorPoly& v) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(F);
    for (int f = 0; f < 6; ++f) {
      auto coeffs = physical_trace_coeffs(hex, v, f);
      double constant = 0.0;
      if (auto it0 = coeffs.find({0, 0}); it0 != coeffs.end()) constant = it0->second;
      for (int k = 1; k < mper; ++k) {
        auto it = coeffs.find({monos[k][0], monos[k][1]});
        double cv = (it == coeffs.end()) ? 0.0 : it->second;
        row(f * mper + k) = cv;
        constant += cv * means[f][k];
      }
      row(f * mper + 0) = constant;
    }
    return row;
  };

  Eigen::MatrixXd Mfull(n, F);
  for (int i = 0; i < n; ++i) Mfull.row(i) = flux_row(cd[i]);

  const int nsupp = (r == 0) ? 2 : 3 * (r + 1);
  const int keep = F - nsupp;
  if (keep > n) throw RankDeficiency("general-r: not enough polynomial flux rows");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Mfull, Eigen::ComputeFullV);
  for (int i = keep; i < std::min<int>(n, F); ++i)
    sp.discarded_singular_values.push_back(svd.singularValues()(i));

  Eigen::MatrixXd Vt = svd.matrixV().transpose();  // F x F
  Eigen::MatrixXd N = Vt.bottomRows(F - keep);     // orthonormal complement of the kept rows

  Eigen::VectorXd phi = Eigen::VectorXd::Zero(F);
  for (int f = 0; f < 6; ++f) phi(f * mper + 0) = hex.face(f).area;
  Eigen::MatrixXd S =
      N * (Eigen::MatrixXd::Identity(F, F) - phi * phi.transpose() / phi.squaredNorm());
  sp.S024135 = S;  // stored for row-space comparisons (natural face order here)

  int idx = 0;
  for (const VectorPoly& v : basis_vec_P(r))
    sp.basis.push_back(pulled_back(hex, v, "p" + std::to_string(idx++)));
  if (!reduced)
    for (const VectorPoly& v : basis_x_tildeP(r))
      sp.basis.push_back(pulled_back(hex, v, "xq" + std::to_string(idx++)));

  SupplementFactory fac(hex);
  for (int srow = 0; srow < S.rows(); ++srow) {
    ElementFunction fn;
    Eigen::VectorXd beta(6);
    for (int f = 0; f < 6; ++f) {
      beta(f) = S(srow, f * mper + 0);
      for (int k = 1; k < mper; ++k) {
        double cv = S(srow, f * mper + k);
        if (cv != 0.0) fn.add_scaled(cv, fac.supplement_monomial(f, monos[k][0], monos[k][1]));
      }
    }
    fn.add_scaled(1.0, realize_constant_fluxes(fac, beta));
    fn.set_tag("sigma_r" + std::to_string(srow));
    sp.basis.push_back(std::move(fn));
  }

  Vec3 c = hex.center();
  std::array<MultiPoly, 3> centered{MultiPoly::var(0) - MultiPoly::constant(rat_from(c[0])),
                                    MultiPoly::var(1) - MultiPoly::constant(rat_from(c[1])),
                                    MultiPoly::var(2) - MultiPoly::constant(rat_from(c[2]))};
  int wdeg = reduced ? r - 1 : r;
  for (const MultiPoly& mono : basis_P(wdeg)) {
    MultiPoly w = mono.compose(centered);
    sp.w_basis.push_back(FlatPoly::from(w));
    if (mono.total_degree() > 0) sp.wstar.push_back(FlatPoly::from(w));
  }

  for (int f = 0; f < 6; ++f)
    for (int k = 0; k < mper; ++k) sp.dofs.push_back({Dof::Kind::Flux, f, k});
  for (int k = 0; k < static_cast<int>(sp.wstar.size()); ++k)
    sp.dofs.push_back({Dof::Kind::Div, -1, k});

  finalize_space(sp, hex);
  assert(sp.dim() == at_dim(r, reduced));
  return sp;
}

// --- mapped comparison spaces ------------------------------------------------------

ElementSpace build_RT(const Hexahedron& hex, int r) {
  if (r < 0 || r > 1) throw ElementBuildFailure("RT supported for r in {0,1}");
  ElementSpace sp;
  sp.family = Family::RT;
  sp.r = r;
  sp.w_on_reference = true;

  for (int k = 0; k < 3; ++k) {
    std::array<int, 3> dmax{r, r, r};
    dmax[k] = r + 1;
    for (int a = 0; a <= dmax[0]; ++a)
      for (int b = 0; b <= dmax[1]; ++b)
        for (int cdeg = 0; cdeg <= dmax[2]; ++cdeg) {
          VectorPoly v;
          v[k] = MultiPoly::monomial(a, b, cdeg);
          ElementFunction fn;
          fn.add(1.0, make_ref_function(v, "rt"));
          sp.basis.push_back(std::move(fn));
        }
  }

  // W = mapped Q_r (reference monomials)
  for (int a = 0; a <= r; ++a)
    for (int b = 0; b <= r; ++b)
      for (int cdeg = 0; cdeg <= r; ++cdeg)
        sp.w_basis.push_back(FlatPoly::from(MultiPoly::monomial(a, b, cdeg)));

  for (int f = 0; f < 6; ++f)
    for (int k = 0; k < (r + 1) * (r + 1); ++k) sp.dofs.push_back({Dof::Kind::Flux, f, k});
  if (r >= 1) {
    for (int k = 0; k < 3; ++k) {
      std::array<int, 3> dmax{r, r, r};
      dmax[k] = r - 1;
      for (int a = 0; a <= dmax[0]; ++a)
        for (int b = 0; b <= dmax[1]; ++b)
          for (int cdeg = 0; cdeg <= dmax[2]; ++cdeg) {
            VectorPoly w;
            w[k] = MultiPoly::monomial(a, b, cdeg);
            sp.interior_moments.push_back(FlatVectorPoly::from(w));
          }
    }
    for (int k = 0; k < static_cast<int>(sp.interior_moments.size()); ++k)
      sp.dofs.push_back({Dof::Kind::Interior, -1, k});
  }

  finalize_space(sp, hex);
  assert(sp.dim() == rt_dim(r));
  return sp;
}

ElementSpace build_BDDF1(const Hexahedron& hex) {
  ElementSpace sp;
  sp.family = Family::BDDF1;
  sp.r = 1;
  sp.reduced = true;

  for (const VectorPoly& v : basis_vec_P(1)) {
    ElementFunction fn;
    fn.add(1.0, make_ref_function(v, "p1"));
    sp.basis.push_back(std::move(fn));
  }
  // six reference curl augmentations: the face-1/3/5 pre-supplements carry
  // linear normal fluxes on every face of the reference cube
  for (int f : {1, 3, 5})
    for (auto [l, m] : {std::pair{1, 0}, {0, 1}}) {
      ElementFunction fn;
      fn.add(1.0, presupplement(f, l, m));
      fn.set_tag("s" + std::to_string(f) + std::to_string(l) + std::to_string(m));
      sp.basis.push_back(std::move(fn));
    }

  sp.w_basis.push_back(FlatPoly::from(MultiPoly::constant(Rat(1))));

  for (int f = 0; f < 6; ++f)
    for (int k = 0; k < 3; ++k) sp.dofs.push_back({Dof::Kind::Flux, f, k});

  finalize_space(sp, hex);
  assert(sp.dim() == 18);
  return sp;
}

ElementSpace build_space(const Hexahedron& hex, Family fam, int r, bool reduced, AT1Mode mode) {
  switch (fam) {
    case Family::AT0Simple: return build_AT0_simple(hex);
    case Family::AT0General: return build_AT0_general(hex);
    case Family::AT1: return build_AT1(hex, mode, reduced);
    case Family::ATr: return build_general_r(hex, r, reduced);
    case Family::RT: return build_RT(hex, r);
    case Family::BDDF1: return build_BDDF1(hex);
  }
  throw ElementBuildFailure("unknown family");
}

// --- projection -------------------------------------------------------------------

Eigen::VectorXd pi_project(const Hexahedron& hex, const ElementSpace& space,
                           const VectorField& v) {
  const int ndof = static_cast<int>(space.dofs.size());
  Eigen::VectorXd rhs(ndof);
  for (int d = 0; d < ndof; ++d) rhs(d) = apply_dof_field(space, hex, space.dofs[d], v);
  return space.dof_matrix.partialPivLu().solve(rhs);
}

// --- verification helpers -----------------------------------------------------------

Eigen::Vector3d fit_face_trace(const Hexahedron& hex, const ElementFunction& fn, int face,
                               int var_a, int var_b, double* residual) {
  const FaceData& fd = hex.face(face);
  const QuadratureRule& q = gauss_rule(2, 8);
  Eigen::MatrixXd A(q.size(), 3);
  Eigen::VectorXd b(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    double s = q.points[k][0], t = q.points[k][1];
    Vec3 xh;
    xh[fd.axis] = fd.odd ? 1.0 : 0.0;
    xh[fd.ref_p] = s;
    xh[fd.ref_q] = t;
    Vec3 x = hex.map(xh);
    double w = std::sqrt(q.weights[k]);
    A(k, 0) = w;
    A(k, 1) = w * x[var_a];
    A(k, 2) = w * x[var_b];
    b(k) = w * fn.trace_ref(face, s, t) / fd.jac_flat.eval(s, t);
  }
  Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
  if (residual) *residual = (A * c - b).norm();
  return c;
}

Eigen::MatrixXd fstar135_matrix(const Hexahedron& tilde, const ElementSpace& at1) {
  // local DOF variable pairs on faces 1, 3, 5 (appendix convention)
  static const int vars[3][2] = {{1, 2}, {0, 2}, {0, 1}};
  static const int faces[3] = {1, 3, 5};
  Eigen::MatrixXd out(9, 9);
  for (int row = 0; row < 9; ++row) {
    const ElementFunction& fn = at1.basis[9 + row];
    for (int fcol = 0; fcol < 3; ++fcol) {
      double res = 0;
      Eigen::Vector3d c =
          fit_face_trace(tilde, fn, faces[fcol], vars[fcol][0], vars[fcol][1], &res);
      if (res > 1e-8)
        throw ElementBuildFailure("AT1 trace is not affine on a face (fit residual too large)");
      out.block<1, 3>(row, 3 * fcol) = c.transpose();
    }
  }
  return out;
}

}  // namespace hexdiv
