// SPDX-License-Identifier: Apache-2.0
#include "hexdiv/supplement.hpp"

#include <cassert>
#include <mutex>

namespace hexdiv {

std::shared_ptr<const RefFunction> make_ref_function(VectorPoly v, std::string tag) {
  auto rf = std::make_shared<RefFunction>();
  rf->div = v.divergence();
  for (int f = 0; f < 6; ++f) {
    int axis = f / 2;
    int val = f % 2;
    FacePoly t = restrict_to_face(v[axis], axis, val);
    rf->trace[f] = (f % 2 == 1) ? t : -t;
  }
  rf->v = std::move(v);
  rf->tag = std::move(tag);
  return rf;
}

namespace {

// Face-1 pattern of the pre-supplement in formal variables (x0, x1, x2):
// x0 plays the role of the face's normal coordinate, x1 and x2 the two local
// coordinates carrying the monomial x1^l x2^m.
VectorPoly presupp_pattern(int l, int m) {
  if (l == 0 && m == 0) {
    VectorPoly v;
    v[0] = MultiPoly::var(0);
    return v;
  }
  const Rat cl(1, l + 1), cm(1, m + 1);
  const MultiPoly x0 = MultiPoly::var(0), x1 = MultiPoly::var(1), x2 = MultiPoly::var(2);
  VectorPoly v;
  v[0] = x0 * MultiPoly::monomial(0, l, m) - x0.scaled(cl * cm);
  v[1] = (x1 - x1 * MultiPoly::monomial(0, l, 0))
             .scaled(cl / 2) *
         (MultiPoly::monomial(0, 0, m) + MultiPoly::constant(cm));
  v[2] = (x2 - x2 * MultiPoly::monomial(0, 0, m))
             .scaled(cm / 2) *
         (MultiPoly::monomial(0, l, 0) + MultiPoly::constant(cl));
  return v;
}

}  // namespace

std::shared_ptr<const RefFunction> presupplement(int face, int l, int m) {
  static std::map<std::array<int, 3>, std::shared_ptr<const RefFunction>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::array<int, 3> key{face, l, m};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const int axis = face / 2;
  const bool odd = (face % 2) == 1;
  const int p = (axis == 0) ? 1 : 0;
  const int q = (axis == 2) ? 1 : 2;

  VectorPoly pat = presupp_pattern(l, m);
  if (!odd) {
    // even face: substitute x0 -> 1 - x0 and flip the normal component
    for (int k = 0; k < 3; ++k) pat[k] = pat[k].substitute_axis_affine(0, Rat(1), Rat(-1));
    pat[0] = -pat[0];
  }
  // rename formal variables (0,1,2) -> (axis, p, q) and place components
  std::array<int, 3> perm{axis, p, q};
  VectorPoly v;
  v[axis] = pat[0].permute_vars(perm);
  v[p] = pat[1].permute_vars(perm);
  v[q] = pat[2].permute_vars(perm);

  auto rf = make_ref_function(std::move(v), "psi^" + std::to_string(face) + "_" +
                                                std::to_string(l) + "," + std::to_string(m));
  // Contract checks, exact: divergence and traces.
  if (l + m >= 1) {
    assert(rf->div.is_zero());
  } else {
    assert(rf->div == MultiPoly::constant(Rat(1)));
  }
  for (int f = 0; f < 6; ++f) {
    if (f == face) continue;
    assert(rf->trace[f].is_zero());
  }
  cache.emplace(key, rf);
  return rf;
}

std::shared_ptr<const RefFunction> face_bubble(const FacePoly& p) {
  // b = x2(1-x2) x3(1-x3) p(x2,x3); field = (0, d b/dx3, -d b/dx2).
  MultiPoly p3;
  for (const auto& [e, c] : p.terms()) p3.add_term({0, e[0], e[1]}, c);
  const MultiPoly x2 = MultiPoly::var(1), x3 = MultiPoly::var(2);
  MultiPoly b = x2 * (MultiPoly::constant(Rat(1)) - x2) * x3 *
                (MultiPoly::constant(Rat(1)) - x3) * p3;
  VectorPoly v;
  v[1] = b.derivative(2);
  v[2] = -b.derivative(1);
  return make_ref_function(std::move(v), "bubble");
}

FluxCoeffs expand_flux_coeffs(const Hexahedron& hex, int face, int l, int m) {
  const FaceData& fd = hex.face(face);
  const int val = fd.odd ? 1 : 0;
  FacePoly Fi = restrict_to_face(hex.map_poly()[fd.loc_i], fd.axis, val);
  FacePoly Fj = restrict_to_face(hex.map_poly()[fd.loc_j], fd.axis, val);
  FacePoly P = fd.jac_scaled;
  for (int k = 0; k < l; ++k) P = P * Fi;
  for (int k = 0; k < m; ++k) P = P * Fj;

  FluxCoeffs fc;
  fc.face = face;
  fc.l = l;
  fc.m = m;
  fc.size = l + m + 2;
  fc.a.assign(fc.size, std::vector<Rat>(fc.size, Rat(0)));
  for (const auto& [e, c] : P.terms()) {
    assert(e[0] < fc.size && e[1] < fc.size);
    if (e[0] == 0 && e[1] == 0) continue;
    fc.a[e[0]][e[1]] = c;
  }
  fc.a00 = P.integral_unit_square();
  fc.a[0][0] = fc.a00;
  return fc;
}

Rat face_monomial_average(const Hexahedron& hex, int face, int l, int m) {
  FluxCoeffs fc = expand_flux_coeffs(hex, face, l, m);
  return fc.a00 / hex.face(face).area_scaled;
}

// --- ElementFunction ---------------------------------------------------------

void ElementFunction::add(double c, std::shared_ptr<const RefFunction> f) {
  if (c == 0.0) return;
  for (Term& t : terms_)
    if (t.f == f) {
      t.c += c;
      return;
    }
  terms_.push_back({c, std::move(f)});
  finalized_ = false;
}

void ElementFunction::add_scaled(double c, const ElementFunction& other) {
  for (const Term& t : other.terms_) add(c * t.c, t.f);
}

bool ElementFunction::divergence_exactly_zero() const {
  for (const Term& t : terms_)
    if (!t.f->div.is_zero()) return false;
  return true;
}

void ElementFunction::finalize() {
  if (finalized_) return;
  // accumulate double coefficients termwise
  std::map<Exps3, double> comp[3], dv;
  std::map<Exps2, double> tr[6];
  for (const Term& t : terms_) {
    for (int k = 0; k < 3; ++k)
      for (const auto& [e, c] : t.f->v[k].terms()) comp[k][e] += t.c * to_double(c);
    for (const auto& [e, c] : t.f->div.terms()) dv[e] += t.c * to_double(c);
    for (int f = 0; f < 6; ++f)
      for (const auto& [e, c] : t.f->trace[f].terms()) tr[f][e] += t.c * to_double(c);
  }
  auto to_flat3 = [](const std::map<Exps3, double>& m) {
    FlatPoly p;
    for (const auto& [e, c] : m) {
      if (c == 0.0) continue;
      FlatPoly::Term t{c, {static_cast<std::uint8_t>(e[0]), static_cast<std::uint8_t>(e[1]),
                           static_cast<std::uint8_t>(e[2])}};
      p.terms.push_back(t);
      p.max_deg = std::max({p.max_deg, e[0], e[1], e[2]});
    }
    return p;
  };
  auto to_flat2 = [](const std::map<Exps2, double>& m) {
    FlatPoly2 p;
    for (const auto& [e, c] : m) {
      if (c == 0.0) continue;
      FlatPoly2::Term t{c, {static_cast<std::uint8_t>(e[0]), static_cast<std::uint8_t>(e[1])}};
      p.terms.push_back(t);
    }
    return p;
  };
  for (int k = 0; k < 3; ++k) flat_.comp[k] = to_flat3(comp[k]);
  flat_div_ = to_flat3(dv);
  for (int f = 0; f < 6; ++f) flat_trace_[f] = to_flat2(tr[f]);
  finalized_ = true;
}

Vec3 ElementFunction::value_ref(const Vec3& xhat) const {
  assert(finalized_);
  return Vec3(flat_.comp[0].eval(xhat[0], xhat[1], xhat[2]),
              flat_.comp[1].eval(xhat[0], xhat[1], xhat[2]),
              flat_.comp[2].eval(xhat[0], xhat[1], xhat[2]));
}

double ElementFunction::div_ref(const Vec3& xhat) const {
  assert(finalized_);
  return flat_div_.eval(xhat[0], xhat[1], xhat[2]);
}

double ElementFunction::trace_ref(int face, double s, double t) const {
  assert(finalized_);
  return flat_trace_[face].eval(s, t);
}

// --- SupplementFactory ---------------------------------------------------------

const FluxCoeffs& SupplementFactory::coeffs(int face, int l, int m) {
  std::array<int, 3> key{face, l, m};
  auto it = coeff_cache_.find(key);
  if (it == coeff_cache_.end())
    it = coeff_cache_.emplace(key, expand_flux_coeffs(hex_, face, l, m)).first;
  return it->second;
}

std::shared_ptr<const RefFunction> SupplementFactory::const_part(int face) {
  auto it = const_cache_.find(face);
  if (it != const_cache_.end()) return it->second;
  const FluxCoeffs& fc = coeffs(face, 0, 0);
  VectorPoly v;
  for (int a = 0; a < fc.size; ++a)
    for (int b = 0; b < fc.size; ++b) {
      if (fc.a[a][b] == 0) continue;
      const RefFunction& psi = *presupplement(face, a, b);
      v = v + psi.v.scaled(fc.a[a][b]);
    }
  auto rf = make_ref_function(std::move(v), "sigma_const^" + std::to_string(face));
  const_cache_.emplace(face, rf);
  return rf;
}

std::shared_ptr<const RefFunction> SupplementFactory::unit_flux(int face) {
  auto it = unit_cache_.find(face);
  if (it != unit_cache_.end()) return it->second;
  const FluxCoeffs& fc = coeffs(face, 0, 0);
  auto cp = const_part(face);
  auto rf = make_ref_function(cp->v.scaled(Rat(1) / fc.a00), "unit_flux^" + std::to_string(face));
  unit_cache_.emplace(face, rf);
  return rf;
}

ElementFunction SupplementFactory::supplement_const(int face) {
  ElementFunction out;
  out.add(1.0 / hex_.face(face).normal_scale, const_part(face));
  out.set_tag("sigma^" + std::to_string(face) + "_0,0");
  return out;
}

ElementFunction SupplementFactory::supplement_monomial(int face, int l, int m) {
  assert(l + m >= 1);
  std::array<int, 3> key{face, l, m};
  auto it = mono_cache_.find(key);
  if (it == mono_cache_.end()) {
    const FluxCoeffs& fc = coeffs(face, l, m);
    const Rat c = fc.a00 / coeffs(face, 0, 0).a00;  // face average of the monomial
    VectorPoly v;
    for (int a = 0; a < fc.size; ++a)
      for (int b = 0; b < fc.size; ++b) {
        if (fc.a[a][b] == 0) continue;
        v = v + presupplement(face, a, b)->v.scaled(fc.a[a][b]);
      }
    v = v - const_part(face)->v.scaled(fc.a00 / coeffs(face, 0, 0).a00);
    (void)c;
    auto rf = make_ref_function(std::move(v), "sigma^" + std::to_string(face) + "_" +
                                                  std::to_string(l) + "," + std::to_string(m));
    assert(rf->div.is_zero());
    it = mono_cache_.emplace(key, rf).first;
  }
  ElementFunction out;
  out.add(1.0 / hex_.face(face).normal_scale, it->second);
  out.set_tag(it->second->tag);
  return out;
}

ElementFunction SupplementFactory::supplement_pair(int i, int j) {
  assert(i != j);
  VectorPoly v = unit_flux(i)->v - unit_flux(j)->v;
  auto rf = make_ref_function(std::move(v),
                              "sigma^{" + std::to_string(i) + "," + std::to_string(j) + "}_0,0");
  assert(rf->div.is_zero());
  ElementFunction out;
  out.add(1.0, rf);
  out.set_tag(rf->tag);
  return out;
}

ElementFunction SupplementFactory::supplement_variable(int face, int axis) {
  RatVec3 g{Rat(0), Rat(0), Rat(0)};
  g[axis] = Rat(1);
  return supplement_affine(face, g);
}

ElementFunction SupplementFactory::supplement_affine(int face, const RatVec3& g) {
  const FaceData& fd = hex_.face(face);
  // Restrict g.x to the face plane: the omitted variable is affine in the
  // local pair, so the mean-centered flux is a combination of the two local
  // monomial supplements.
  Rat ti = g[fd.loc_i] + g[fd.omitted] * fd.plane_ti;
  Rat tj = g[fd.loc_j] + g[fd.omitted] * fd.plane_tj;
  ElementFunction out;
  if (ti != 0) out.add_scaled(to_double(ti), supplement_monomial(face, 1, 0));
  if (tj != 0) out.add_scaled(to_double(tj), supplement_monomial(face, 0, 1));
  out.set_tag("sigma^" + std::to_string(face) + "_affine");
  return out;
}

ElementFunction supplement_const(const Hexahedron& hex, int face) {
  SupplementFactory f(hex);
  return f.supplement_const(face);
}

ElementFunction supplement_monomial(const Hexahedron& hex, int face, int l, int m) {
  SupplementFactory f(hex);
  return f.supplement_monomial(face, l, m);
}

ElementFunction supplement_pair(const Hexahedron& hex, int i, int j) {
  SupplementFactory f(hex);
  return f.supplement_pair(i, j);
}

// --- exact verification ---------------------------------------------------------

bool verify_supplement_monomial_exact(const Hexahedron& hex, int face, int l, int m) {
  SupplementFactory fac(hex);
  ElementFunction s = fac.supplement_monomial(face, l, m);
  if (s.terms().size() != 1) return false;
  const RefFunction& P = *s.terms()[0].f;
  if (!P.div.is_zero()) return false;
  // trace on the target face: R * ((x_i o F)^l (x_j o F)^m - c), exactly
  const FaceData& fd = hex.face(face);
  const int val = fd.odd ? 1 : 0;
  FacePoly Fi = restrict_to_face(hex.map_poly()[fd.loc_i], fd.axis, val);
  FacePoly Fj = restrict_to_face(hex.map_poly()[fd.loc_j], fd.axis, val);
  FacePoly mono = FacePoly::constant(Rat(1));
  for (int k = 0; k < l; ++k) mono = mono * Fi;
  for (int k = 0; k < m; ++k) mono = mono * Fj;
  Rat c = face_monomial_average(hex, face, l, m);
  FacePoly want = fd.jac_scaled * (mono - FacePoly::constant(c));
  if (!(P.trace[face] == want)) return false;
  for (int f = 0; f < 6; ++f)
    if (f != face && !P.trace[f].is_zero()) return false;
  return true;
}

bool verify_supplement_pair_exact(const Hexahedron& hex, int i, int j) {
  SupplementFactory fac(hex);
  ElementFunction s = fac.supplement_pair(i, j);
  if (s.terms().size() != 1) return false;
  const RefFunction& P = *s.terms()[0].f;
  if (!P.div.is_zero()) return false;
  // reference traces: K_i/|f_i| = s_i R_i / (s_i area_scaled_i) on face i
  FacePoly want_i = hex.face(i).jac_scaled.scaled(Rat(1) / hex.face(i).area_scaled);
  FacePoly want_j = hex.face(j).jac_scaled.scaled(Rat(-1) / hex.face(j).area_scaled);
  if (!(P.trace[i] == want_i)) return false;
  if (!(P.trace[j] == want_j)) return false;
  for (int f = 0; f < 6; ++f)
    if (f != i && f != j && !P.trace[f].is_zero()) return false;
  return true;
}

bool verify_supplement_const_exact(const Hexahedron& hex, int face) {
  SupplementFactory fac(hex);
  ElementFunction s = fac.supplement_const(face);
  if (s.terms().size() != 1) return false;
  const RefFunction& P = *s.terms()[0].f;
  // reference divergence of the rational part is s*|f| = area_scaled
  if (!(P.div == MultiPoly::constant(hex.face(face).area_scaled))) return false;
  if (!(P.trace[face] == hex.face(face).jac_scaled)) return false;
  for (int f = 0; f < 6; ++f)
    if (f != face && !P.trace[f].is_zero()) return false;
  return true;
}

}  // namespace hexdiv
