// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hexdiv/geometry.hpp"

namespace hexdiv {

/// An exact reference vector function: rational polynomial components plus
/// the derived divergence and the six reference normal traces
/// (trace[f] = v . nu_hat on reference face f, in that face's two local
/// reference variables).
struct RefFunction {
  VectorPoly v;
  MultiPoly div;
  std::array<FacePoly, 6> trace;
  std::string tag;
};

std::shared_ptr<const RefFunction> make_ref_function(VectorPoly v, std::string tag);

/// Pre-supplement psi^i_{l,m} on the reference cube: exact divergence zero for
/// l+m >= 1 (divergence one for l = m = 0), reference normal trace
/// xhat_p^l xhat_q^m - 1/((l+1)(m+1)) on face i (trace 1 for l = m = 0) and
/// zero on the other five faces.  Cached; element independent.
std::shared_ptr<const RefFunction> presupplement(int face, int l, int m);

/// Interior divergence-free bubble associated with the face-1 variable pair:
/// (0, d/dx3 [b p], -d/dx2 [b p]) with b = x2(1-x2) x3(1-x3); all six normal
/// traces vanish identically and the divergence is exactly zero.
std::shared_ptr<const RefFunction> face_bubble(const FacePoly& p);

/// Exact expansion of K_i * (x_{i1} o F)^l * (x_{j1} o F)^m on face i in the
/// basis {1} u {xhat^a xhat^b - 1/((a+1)(b+1))}.  All data is scaled by the
/// normal scale s_i (so it stays rational); alpha_ij = a_ij / s_i.
struct FluxCoeffs {
  int face = 0;
  int l = 0, m = 0;
  int size = 0;                       // coefficients run over 0 <= a,b <= l+m+1
  std::vector<std::vector<Rat>> a;    // scaled coefficients s*alpha
  Rat a00;                            // s * alpha_00 = s * integral_f of the monomial

  double alpha(int i, int j, double normal_scale) const {
    return to_double(a[i][j]) / normal_scale;
  }
};

FluxCoeffs expand_flux_coeffs(const Hexahedron& hex, int face, int l, int m);

/// Exact face-average of the local monomial x_{i1}^l x_{j1}^m over face i.
Rat face_monomial_average(const Hexahedron& hex, int face, int l, int m);

/// A member of an element space: a formal combination sum_k c_k * ref_k of
/// exact reference functions with floating coefficients.  The flattened
/// caches are what assembly and evaluation use.
class ElementFunction {
 public:
  struct Term {
    double c;
    std::shared_ptr<const RefFunction> f;
  };

  ElementFunction() = default;

  void add(double c, std::shared_ptr<const RefFunction> f);
  void add_scaled(double c, const ElementFunction& other);
  void set_tag(std::string t) { tag_ = std::move(t); }
  const std::string& tag() const { return tag_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// True iff every term's exact divergence is the zero polynomial.
  bool divergence_exactly_zero() const;

  void finalize();
  bool finalized() const { return finalized_; }

  const FlatVectorPoly& flat() const { return flat_; }
  const FlatPoly& flat_div() const { return flat_div_; }
  const FlatPoly2& flat_trace(int face) const { return flat_trace_[face]; }

  Vec3 value_ref(const Vec3& xhat) const;
  double div_ref(const Vec3& xhat) const;
  double trace_ref(int face, double s, double t) const;

 private:
  std::vector<Term> terms_;
  std::string tag_;
  bool finalized_ = false;
  FlatVectorPoly flat_;
  FlatPoly flat_div_;
  std::array<FlatPoly2, 6> flat_trace_;
};

/// Builds the supplements of one hexahedron; caches the per-face expansions.
class SupplementFactory {
 public:
  explicit SupplementFactory(const Hexahedron& hex) : hex_(hex) {}

  const Hexahedron& hex() const { return hex_; }

  /// sigma^i_{0,0}: reference divergence identically |f_i|, reference trace
  /// K_i on face i and zero elsewhere.
  ElementFunction supplement_const(int face);

  /// sigma^i_{l,m}, l+m >= 1: exact zero divergence; physical normal trace
  /// x_{i1}^l x_{j1}^m - c on face i (c the face-average of the monomial),
  /// zero on the other faces.
  ElementFunction supplement_monomial(int face, int l, int m);

  /// sigma^{i,j}_{0,0}: exact zero divergence; physical trace 1/|f_i| on
  /// face i and -1/|f_j| on face j.
  ElementFunction supplement_pair(int i, int j);

  /// Divergence-free supplement with physical trace x_axis - avg_face(x_axis)
  /// on `face`, zero elsewhere.
  ElementFunction supplement_variable(int face, int axis);

  /// Divergence-free supplement with physical trace g.x - avg_face(g.x).
  ElementFunction supplement_affine(int face, const RatVec3& g);

  /// Unit-flux building block: physical trace exactly 1 on `face`, zero on
  /// the others; reference divergence identically 1 (a fully rational object).
  std::shared_ptr<const RefFunction> unit_flux(int face);

  const FluxCoeffs& coeffs(int face, int l, int m);

 private:
  std::shared_ptr<const RefFunction> const_part(int face);  // sum a_ab psi_ab, l=m=0

  const Hexahedron& hex_;
  std::map<std::array<int, 3>, FluxCoeffs> coeff_cache_;
  std::map<int, std::shared_ptr<const RefFunction>> const_cache_;
  std::map<int, std::shared_ptr<const RefFunction>> unit_cache_;
  std::map<std::array<int, 3>, std::shared_ptr<const RefFunction>> mono_cache_;
};

// Convenience wrappers (one-off factory).
ElementFunction supplement_const(const Hexahedron& hex, int face);
ElementFunction supplement_monomial(const Hexahedron& hex, int face, int l, int m);
ElementFunction supplement_pair(const Hexahedron& hex, int i, int j);

// Exact verification hooks (used by tests and `hexdiv verify supplements`):
// they rebuild the rational parts and check, in exact arithmetic, that the
// divergence is the zero polynomial and the traces match their contracts.
bool verify_supplement_monomial_exact(const Hexahedron& hex, int face, int l, int m);
bool verify_supplement_pair_exact(const Hexahedron& hex, int i, int j);
bool verify_supplement_const_exact(const Hexahedron& hex, int face);

}  // namespace hexdiv
