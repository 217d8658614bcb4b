// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>

#include "hexdiv/supplement.hpp"

namespace hexdiv {

enum class Family { AT0Simple, AT0General, AT1, ATr, RT, BDDF1 };
enum class AT1Mode { Auto, Symmetric, NonSymmetric };

const char* family_name(Family f);

/// Multiplier / trace-space size per face.
int face_space_dim(Family fam, int r);

// ---------------------------------------------------------------------------
// Face frames and multiplier bases.  A FaceFrame is built from the four
// corner positions alone, so the two elements sharing a mesh face construct
// identical data.
// ---------------------------------------------------------------------------

struct FaceFrame {
  std::array<Vec3, 4> corners;  // y00, y10, y01, y11 (bilinear corner order)
  Vec3 normal;                  // unit; orientation fixed by the corner order
  double area = 0;
  Vec3 centroid;                // area average of x
  int loc_i = 0, loc_j = 0;     // physical local variables (max-|normal| rule)

  static FaceFrame from_corners(const std::array<Vec3, 4>& corners);
  static FaceFrame from_face(const Hexahedron& hex, int face);

  Vec3 param_point(double s, double t) const;  // bilinear map [0,1]^2 -> face
  double jac(double s, double t) const;        // surface measure factor
  /// Invert the bilinear parameterization (flat quadrilateral).
  std::pair<double, double> param_of(const Vec3& x) const;
};

/// Basis of the face trace space M(f): mean-centered monomials in the local
/// physical variables for the AT and BDDF families, tensor Q_r in the face
/// parameterization for RT.
class MultiplierBasis {
 public:
  MultiplierBasis() = default;
  MultiplierBasis(Family fam, int r, FaceFrame frame);

  int count() const { return count_; }
  const FaceFrame& frame() const { return frame_; }

  /// Evaluate member k at a physical point on the face.
  double eval_phys(int k, const Vec3& x) const;
  /// Evaluate member k at face parameter (s,t).
  double eval_param(int k, double s, double t) const;

 private:
  Family fam_ = Family::AT0Simple;
  int r_ = 0;
  int count_ = 0;
  FaceFrame frame_;
  std::vector<std::array<int, 2>> powers_;  // monomial exponents in locals (AT)
  std::vector<double> means_;               // face averages of those monomials
};

// ---------------------------------------------------------------------------
// Element spaces.
// ---------------------------------------------------------------------------

struct Dof {
  enum class Kind { Flux, Div, Bubble, Interior };
  Kind kind = Kind::Flux;
  int face = -1;  // Flux only
  int k = 0;      // index within the face basis / W* list / bubble or moment list
};

struct GeometryReport {
  Mat3 H, C, CH;                      // on the normalized element
  std::array<double, 3> minors1{};    // principal minors of H, order 1
  std::array<double, 3> minors2{};    // order 2 ((1,2),(1,3),(2,3) blocks)
  double detH = 0;
  double det_CH = 0;
  double cond_CH = 0;
  double ch_scale = 0;                // product of the row norms of C o H
  int parallel_pairs = 0;
  bool truncated_pillar = false;
  bool symmetric_recommended = false;
};

struct AffineNormalization {
  Mat3 L;      // columns x124-x024, x034-x024, x025-x024
  Vec3 shift;  // x024
  Mat3 Linv;
  std::array<RatVec3, 3> Linv_rows_rat;  // exact rows of L^{-1}
  std::array<Vec3, 8> normalized_vertices;
};

AffineNormalization affine_normalize(const Hexahedron& hex);
GeometryReport geometry_report(const Hexahedron& hex, double det_threshold = 1e-8);

struct ElementSpace {
  Family family = Family::AT0Simple;
  int r = 0;
  bool reduced = false;

  std::vector<ElementFunction> basis;
  std::vector<Dof> dofs;

  bool w_on_reference = false;      // RT: w = what o F^{-1}
  std::vector<FlatPoly> w_basis;    // scalar space W(E)
  std::vector<FlatPoly> wstar;      // divergence-DOF test functions (no constant)

  std::vector<MultiplierBasis> face_basis;  // one per face, own-face frames

  std::vector<int> bubble_index;                 // basis indices of interior bubbles
  std::vector<FlatVectorPoly> interior_moments;  // RT interior DOF fields (reference)

  Eigen::MatrixXd dof_matrix;  // rows: dofs, cols: basis
  double dof_condition = 0;
  Eigen::MatrixXd flux_matrix;  // rows: basis, cols: stacked face-basis coefficients

  std::vector<double> discarded_singular_values;  // general-r construction
  AT1Mode at1_mode_used = AT1Mode::Auto;
  double at1_s = 0, at1_t = 0;
  std::optional<GeometryReport> report;

  // AT0 general construction data (for verification)
  Eigen::MatrixXd M024135, N024135, S024135;  // columns ordered (f0,f2,f4,f1,f3,f5)

  std::vector<ElementFunction> shape;  // AT0 simple closed-form shape functions

  int dim() const { return static_cast<int>(basis.size()); }
};

/// Expected dimensions (Table-style bookkeeping).
int at_dim(int r, bool reduced);
int rt_dim(int r);

ElementSpace build_AT0_simple(const Hexahedron& hex);
ElementSpace build_AT0_general(const Hexahedron& hex);
ElementSpace build_AT1(const Hexahedron& hex, AT1Mode mode, bool reduced);
ElementSpace build_general_r(const Hexahedron& hex, int r, bool reduced);
ElementSpace build_RT(const Hexahedron& hex, int r);
ElementSpace build_BDDF1(const Hexahedron& hex);

ElementSpace build_space(const Hexahedron& hex, Family fam, int r, bool reduced,
                         AT1Mode mode = AT1Mode::Auto);

/// Lemma 5.1 predicate: with [M;N] invertible and phi not in row(N), the
/// stacked matrix [M; N(I - phi phi^T/phi^T phi)] is invertible.
bool lemma51_check(const Eigen::MatrixXd& M, const Eigen::MatrixXd& N,
                   const Eigen::VectorXd& phi, double rel_tol = 1e-10);

/// Apply one DOF functional to a member of the space.
double apply_dof(const ElementSpace& space, const Hexahedron& hex, const Dof& dof,
                 const ElementFunction& v);

/// A smooth vector field given by callables (physical value and divergence).
struct VectorField {
  std::function<Vec3(const Vec3&)> value;
  std::function<double(const Vec3&)> divergence;
};

double apply_dof_field(const ElementSpace& space, const Hexahedron& hex, const Dof& dof,
                       const VectorField& v);

/// Interpolation onto the space by matching all DOFs; returns coefficients.
Eigen::VectorXd pi_project(const Hexahedron& hex, const ElementSpace& space,
                           const VectorField& v);

/// Least-squares expansion of the physical normal trace of `fn` on `face` in
/// the affine set {1, x_a, x_b}; residual is the L2 misfit.
Eigen::Vector3d fit_face_trace(const Hexahedron& hex, const ElementFunction& fn, int face,
                               int var_a, int var_b, double* residual = nullptr);

/// The 9x9 matrix of Theorem-5.3 fluxes in local face DOFs (built on the
/// normalized element; rows psi9*,psi10*,psi11*, sigma0..sigma5).
Eigen::MatrixXd fstar135_matrix(const Hexahedron& normalized_hex, const ElementSpace& at1_space);

/// Bilinear determinant d(s,t) of the non-symmetric supplement selection,
/// evaluated from the normalized element's face data.
double at1_nonsym_d(const Hexahedron& normalized_hex, double s, double t);

}  // namespace hexdiv
