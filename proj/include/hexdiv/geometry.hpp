// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "hexdiv/errors.hpp"
#include "hexdiv/polynomial.hpp"

namespace hexdiv {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using RatVec3 = std::array<Rat, 3>;

// Vertex ordering: index = b1 + 2*b2 + 4*b3 where bit bk is 1 iff the vertex
// lies on the odd face of axis k, i.e.
//   [x024, x124, x034, x134, x025, x125, x035, x135].
// Reference faces: face 2k is {xhat_k = 0}, face 2k+1 is {xhat_k = 1}.

/// Vertex indices of each reference face, in (p,q)-corner order
/// y0=(0,0), y1=(1,0), y2=(0,1), y3=(1,1) of the face's two local
/// reference axes (ascending).
std::array<int, 4> face_corner_indices(int face);

/// Per-face geometric data of a hexahedron.
struct FaceData {
  int index = 0;        // 0..5
  int axis = 0;         // reference axis (0..2) the face is orthogonal to
  bool odd = false;     // face {xhat_axis = 1}?
  int ref_p = 0, ref_q = 0;  // the face's two local reference axes, ascending

  Vec3 normal;              // outward unit normal
  RatVec3 scaled_normal;    // exact outward normal (unnormalized cross product)
  double normal_scale = 1;  // s = |scaled_normal|, so normal = scaled_normal/s

  double area = 0;
  Rat area_scaled;          // s * area = integral of the scaled face Jacobian

  Vec3 centroid;            // area-average of x over the face
  RatVec3 centroid_rat;     // exact centroid

  int loc_i = 0, loc_j = 0;  // physical local variable axes (ascending)
  int omitted = 0;           // the omitted axis (max-|normal| rule)

  FacePoly jac_scaled;   // R_i = s * K_i, bilinear in (xhat_p, xhat_q), exact
  FlatPoly2 jac_flat;    // K_i = R_i / s with double coefficients
  std::array<double, 4> jac_corners{};  // K_i at the four face corners

  /// Solve the face plane for the omitted variable:
  ///   x_omitted = t0 + ti * x_loc_i + tj * x_loc_j   (exact).
  Rat plane_t0, plane_ti, plane_tj;

  /// Exact face-average of the local monomial x_loc_i^l x_loc_j^m.
  /// (Filled on demand by the supplement machinery; see expand_flux_coeffs.)
};

/// A convex, flat-faced cuboidal hexahedron with its trilinear reference map,
/// exact (rational) map polynomials, and per-face data.  Immutable.
class Hexahedron {
 public:
  explicit Hexahedron(const std::array<Vec3, 8>& vertices, double flat_tol = 1e-10);
  /// Exact-coordinate constructor.  Mesh generators use this: small rational
  /// coordinates keep all construction-time algebra cheap and exactly flat.
  explicit Hexahedron(const std::array<RatVec3, 8>& vertices, double flat_tol = 1e-10);

  const std::array<Vec3, 8>& vertices() const { return verts_; }
  const Vec3& vertex(int i) const { return verts_[i]; }
  const std::array<RatVec3, 8>& vertices_rat() const { return verts_rat_; }
  double flat_tol() const { return flat_tol_; }
  double diameter() const { return diameter_; }

  const FaceData& face(int i) const { return faces_[i]; }

  /// Components of the trilinear map F_E, exact.
  const std::array<MultiPoly, 3>& map_poly() const { return F_; }
  /// Jacobian matrix entries dF_i/dxhat_j, exact.
  const MultiPoly& jac_entry(int i, int j) const { return DF_[i][j]; }
  /// det DF_E, exact (degree <= 2 in each variable).
  const MultiPoly& jac_det_poly() const { return J_; }
  /// Adjugate of DF_E (J * DF^{-1}), exact.
  const MultiPoly& adj_entry(int i, int j) const { return adj_[i][j]; }

  Vec3 map(const Vec3& xhat) const;
  Mat3 jacobian_matrix(const Vec3& xhat) const;
  /// det DF at xhat; throws NonPositiveJacobian if <= 0.
  double jacobian_det(const Vec3& xhat) const;

  /// Physical value of the Piola transform of a reference field value vhat
  /// at the reference point xhat: (1/J) DF vhat.
  Vec3 piola(const Vec3& vhat, const Vec3& xhat) const;

  /// Invert the trilinear map by damped Newton from the cube center.
  /// Throws NoConvergence after 50 iterations.
  Vec3 inverse_map(const Vec3& x, double tol = 1e-12) const;

  /// Pull a physical polynomial field back to the reference cube through the
  /// inverse Piola transform: vhat = adj(DF) (v o F), exact.  The Piola image
  /// of the result is v itself.
  VectorPoly pull_back(const VectorPoly& v_physical) const;

  /// Compose a physical scalar polynomial with the map: p o F, exact.
  MultiPoly compose(const MultiPoly& p_physical) const;

  Vec3 center() const;  // vertex average

 private:
  void init();
  void build_faces();
  void validate();

  std::array<Vec3, 8> verts_;
  std::array<RatVec3, 8> verts_rat_;
  double flat_tol_;
  double diameter_ = 0;
  std::array<MultiPoly, 3> F_;
  std::array<std::array<MultiPoly, 3>, 3> DF_;
  MultiPoly J_;
  std::array<std::array<MultiPoly, 3>, 3> adj_;
  std::array<FlatPoly, 3> F_flat_;
  std::array<std::array<FlatPoly, 3>, 3> DF_flat_;
  FlatPoly J_flat_;
  std::array<FaceData, 6> faces_;
};

/// 8-term trilinear blend of the vertices at xhat (free-standing evaluator).
Vec3 trilinear_map(const std::array<Vec3, 8>& verts, const Vec3& xhat);

/// The unit cube element.
Hexahedron unit_cube();

}  // namespace hexdiv
