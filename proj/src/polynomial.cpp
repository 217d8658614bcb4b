// SPDX-License-Identifier: Apache-2.0
#include "hexdiv/polynomial.hpp"

#include <algorithm>
#include <cassert>

namespace hexdiv {

// --- MultiPoly ---------------------------------------------------------------

MultiPoly MultiPoly::constant(const Rat& c) {
  MultiPoly p;
  p.add_term({0, 0, 0}, c);
  return p;
}

MultiPoly MultiPoly::monomial(int a, int b, int c, const Rat& coef) {
  MultiPoly p;
  p.add_term({a, b, c}, coef);
  return p;
}

MultiPoly MultiPoly::var(int axis) {
  Exps3 e{0, 0, 0};
  e[axis] = 1;
  MultiPoly p;
  p.add_term(e, Rat(1));
  return p;
}

void MultiPoly::add_term(const Exps3& e, const Rat& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int MultiPoly::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

int MultiPoly::degree_in(int axis) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[axis]);
  return d;
}

Rat MultiPoly::coeff(int a, int b, int c) const {
  auto it = terms_.find({a, b, c});
  return it == terms_.end() ? Rat(0) : it->second;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  MultiPoly r = *this;
  r += o;
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  MultiPoly r = *this;
  r -= o;
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  MultiPoly r;
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_)
      r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
  return r;
}

MultiPoly MultiPoly::scaled(const Rat& s) const {
  MultiPoly r;
  if (s == 0) return r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
  return r;
}

MultiPoly MultiPoly::derivative(int axis) const {
  MultiPoly r;
  for (const auto& [e, c] : terms_) {
    if (e[axis] == 0) continue;
    Exps3 d = e;
    d[axis] -= 1;
    r.add_term(d, c * e[axis]);
  }
  return r;
}

Rat MultiPoly::evaluate(const Rat& x, const Rat& y, const Rat& z) const {
  Rat sum(0);
  for (const auto& [e, c] : terms_) {
    Rat t = c;
    for (int k = 0; k < e[0]; ++k) t *= x;
    for (int k = 0; k < e[1]; ++k) t *= y;
    for (int k = 0; k < e[2]; ++k) t *= z;
    sum += t;
  }
  return sum;
}

double MultiPoly::evaluate(double x, double y, double z) const {
  return FlatPoly::from(*this).eval(x, y, z);
}

MultiPoly MultiPoly::compose(const std::array<MultiPoly, 3>& args) const {
  // Cache powers of each argument up to the needed degree.
  std::array<std::vector<MultiPoly>, 3> pows;
  for (int k = 0; k < 3; ++k) {
    pows[k].push_back(MultiPoly::constant(Rat(1)));
    int need = degree_in(k);
    for (int d = 1; d <= need; ++d) pows[k].push_back(pows[k].back() * args[k]);
  }
  MultiPoly r;
  for (const auto& [e, c] : terms_) {
    MultiPoly t = pows[0][e[0]] * pows[1][e[1]] * pows[2][e[2]];
    r += t.scaled(c);
  }
  return r;
}

MultiPoly MultiPoly::substitute_axis_affine(int axis, const Rat& c0, const Rat& c1) const {
  std::array<MultiPoly, 3> args{MultiPoly::var(0), MultiPoly::var(1), MultiPoly::var(2)};
  args[axis] = MultiPoly::constant(c0) + MultiPoly::var(axis).scaled(c1);
  return compose(args);
}

MultiPoly MultiPoly::permute_vars(const std::array<int, 3>& perm) const {
  MultiPoly r;
  for (const auto& [e, c] : terms_) {
    Exps3 d{0, 0, 0};
    for (int k = 0; k < 3; ++k) d[perm[k]] = e[k];
    r.add_term(d, c);
  }
  return r;
}

Rat MultiPoly::integral_unit_cube() const {
  Rat sum(0);
  for (const auto& [e, c] : terms_)
    sum += c / Rat((e[0] + 1) * (e[1] + 1) * (e[2] + 1));
  return sum;
}

// --- FacePoly ----------------------------------------------------------------

FacePoly FacePoly::constant(const Rat& c) {
  FacePoly p;
  p.add_term({0, 0}, c);
  return p;
}

FacePoly FacePoly::monomial(int a, int b, const Rat& coef) {
  FacePoly p;
  p.add_term({a, b}, coef);
  return p;
}

FacePoly FacePoly::var(int which) {
  Exps2 e{0, 0};
  e[which] = 1;
  FacePoly p;
  p.add_term(e, Rat(1));
  return p;
}

void FacePoly::add_term(const Exps2& e, const Rat& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int FacePoly::degree_in(int which) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[which]);
  return d;
}

int FacePoly::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1]);
  return d;
}

Rat FacePoly::coeff(int a, int b) const {
  auto it = terms_.find({a, b});
  return it == terms_.end() ? Rat(0) : it->second;
}

FacePoly& FacePoly::operator+=(const FacePoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

FacePoly& FacePoly::operator-=(const FacePoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

FacePoly FacePoly::operator+(const FacePoly& o) const {
  FacePoly r = *this;
  r += o;
  return r;
}

FacePoly FacePoly::operator-(const FacePoly& o) const {
  FacePoly r = *this;
  r -= o;
  return r;
}

FacePoly FacePoly::operator-() const {
  FacePoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

FacePoly FacePoly::operator*(const FacePoly& o) const {
  FacePoly r;
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_)
      r.add_term({ea[0] + eb[0], ea[1] + eb[1]}, ca * cb);
  return r;
}

FacePoly FacePoly::scaled(const Rat& s) const {
  FacePoly r;
  if (s == 0) return r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
  return r;
}

Rat FacePoly::evaluate(const Rat& s, const Rat& t) const {
  Rat sum(0);
  for (const auto& [e, c] : terms_) {
    Rat v = c;
    for (int k = 0; k < e[0]; ++k) v *= s;
    for (int k = 0; k < e[1]; ++k) v *= t;
    sum += v;
  }
  return sum;
}

double FacePoly::evaluate(double s, double t) const {
  return FlatPoly2::from(*this).eval(s, t);
}

Rat FacePoly::integral_unit_square() const {
  Rat sum(0);
  for (const auto& [e, c] : terms_) sum += c / Rat((e[0] + 1) * (e[1] + 1));
  return sum;
}

// --- VectorPoly --------------------------------------------------------------

VectorPoly VectorPoly::operator+(const VectorPoly& o) const {
  return VectorPoly({comp[0] + o.comp[0], comp[1] + o.comp[1], comp[2] + o.comp[2]});
}

VectorPoly VectorPoly::operator-(const VectorPoly& o) const {
  return VectorPoly({comp[0] - o.comp[0], comp[1] - o.comp[1], comp[2] - o.comp[2]});
}

VectorPoly VectorPoly::scaled(const Rat& s) const {
  return VectorPoly({comp[0].scaled(s), comp[1].scaled(s), comp[2].scaled(s)});
}

bool VectorPoly::is_zero() const {
  return comp[0].is_zero() && comp[1].is_zero() && comp[2].is_zero();
}

MultiPoly VectorPoly::divergence() const {
  return comp[0].derivative(0) + comp[1].derivative(1) + comp[2].derivative(2);
}

VectorPoly VectorPoly::curl() const {
  return VectorPoly({comp[2].derivative(1) - comp[1].derivative(2),
                     comp[0].derivative(2) - comp[2].derivative(0),
                     comp[1].derivative(0) - comp[0].derivative(1)});
}

FacePoly restrict_to_face(const MultiPoly& p, int axis, int value01) {
  FacePoly r;
  for (const auto& [e, c] : p.terms()) {
    if (value01 == 0 && e[axis] > 0) continue;  // substituting 0 kills the term
    Exps2 f;
    int k2 = 0;
    for (int k = 0; k < 3; ++k)
      if (k != axis) f[k2++] = e[k];
    r.add_term(f, c);
  }
  return r;
}

// --- flattened evaluators ------------------------------------------------------

FlatPoly FlatPoly::from(const MultiPoly& p) {
  FlatPoly f;
  f.terms.reserve(p.terms().size());
  for (const auto& [e, c] : p.terms()) {
    Term t;
    t.c = to_double(c);
    t.e[0] = static_cast<std::uint8_t>(e[0]);
    t.e[1] = static_cast<std::uint8_t>(e[1]);
    t.e[2] = static_cast<std::uint8_t>(e[2]);
    f.terms.push_back(t);
    f.max_deg = std::max({f.max_deg, e[0], e[1], e[2]});
  }
  return f;
}

double FlatPoly::eval(double x, double y, double z) const {
  double xp[16], yp[16], zp[16];
  fill_pows(x, max_deg, xp);
  fill_pows(y, max_deg, yp);
  fill_pows(z, max_deg, zp);
  return eval_pows(xp, yp, zp);
}

double FlatPoly::eval_pows(const double* xp, const double* yp, const double* zp) const {
  double sum = 0.0;
  for (const Term& t : terms) sum += t.c * xp[t.e[0]] * yp[t.e[1]] * zp[t.e[2]];
  return sum;
}

FlatPoly2 FlatPoly2::from(const FacePoly& p) {
  FlatPoly2 f;
  f.terms.reserve(p.terms().size());
  for (const auto& [e, c] : p.terms()) {
    Term t;
    t.c = to_double(c);
    t.e[0] = static_cast<std::uint8_t>(e[0]);
    t.e[1] = static_cast<std::uint8_t>(e[1]);
    f.terms.push_back(t);
  }
  return f;
}

double FlatPoly2::eval(double s, double t) const {
  double sum = 0.0;
  for (const Term& tm : terms) {
    double v = tm.c;
    for (int k = 0; k < tm.e[0]; ++k) v *= s;
    for (int k = 0; k < tm.e[1]; ++k) v *= t;
    sum += v;
  }
  return sum;
}

FlatVectorPoly FlatVectorPoly::from(const VectorPoly& v) {
  FlatVectorPoly f;
  for (int k = 0; k < 3; ++k) f.comp[k] = FlatPoly::from(v[k]);
  return f;
}

// --- bases ---------------------------------------------------------------------

int dim_P3(int r) { return (r + 1) * (r + 2) * (r + 3) / 6; }
int dim_P2(int r) { return (r + 1) * (r + 2) / 2; }

std::vector<MultiPoly> basis_P(int r) {
  std::vector<MultiPoly> out;
  for (int d = 0; d <= r; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b)
        out.push_back(MultiPoly::monomial(a, b, d - a - b));
  return out;
}

std::vector<VectorPoly> basis_vec_P(int r) {
  std::vector<VectorPoly> out;
  for (const MultiPoly& p : basis_P(r))
    for (int k = 0; k < 3; ++k) {
      VectorPoly v;
      v[k] = p;
      out.push_back(v);
    }
  return out;
}

std::vector<VectorPoly> basis_x_tildeP(int r) {
  std::vector<VectorPoly> out;
  for (int a = r; a >= 0; --a)
    for (int b = r - a; b >= 0; --b) {
      MultiPoly q = MultiPoly::monomial(a, b, r - a - b);
      out.push_back(VectorPoly(
          {MultiPoly::var(0) * q, MultiPoly::var(1) * q, MultiPoly::var(2) * q}));
    }
  return out;
}

namespace {

// Exact row reduction over the monomial coefficient space to pick a linearly
// independent subset of vector polynomials, preserving input order.
std::vector<int> independent_subset(const std::vector<VectorPoly>& fields) {
  // Collect all monomials appearing in any component.
  std::map<std::pair<int, Exps3>, int> col_of;
  for (const auto& v : fields)
    for (int k = 0; k < 3; ++k)
      for (const auto& [e, c] : v[k].terms()) {
        auto key = std::make_pair(k, e);
        if (!col_of.count(key)) {
          int id = static_cast<int>(col_of.size());
          col_of[key] = id;
        }
      }
  const int ncols = static_cast<int>(col_of.size());
  std::vector<std::vector<Rat>> rows;  // reduced pivot rows
  std::vector<int> pivot_col;
  std::vector<int> keep;
  for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
    std::vector<Rat> row(ncols, Rat(0));
    for (int k = 0; k < 3; ++k)
      for (const auto& [e, c] : fields[i][k].terms())
        row[col_of[{k, e}]] = c;
    // reduce against existing pivots
    for (size_t p = 0; p < rows.size(); ++p) {
      const Rat& v = row[pivot_col[p]];
      if (v == 0) continue;
      Rat f = v;  // pivot rows are normalized to pivot 1
      for (int j = 0; j < ncols; ++j) row[j] -= f * rows[p][j];
    }
    int pc = -1;
    for (int j = 0; j < ncols; ++j)
      if (row[j] != 0) {
        pc = j;
        break;
      }
    if (pc < 0) continue;  // dependent
    Rat inv = Rat(1) / row[pc];
    for (int j = 0; j < ncols; ++j) row[j] *= inv;
    rows.push_back(std::move(row));
    pivot_col.push_back(pc);
    keep.push_back(i);
  }
  return keep;
}

}  // namespace

std::vector<VectorPoly> basis_curl_P(int rp1) {
  std::vector<VectorPoly> curls;
  for (const VectorPoly& w : basis_vec_P(rp1)) {
    VectorPoly c = w.curl();
    if (!c.is_zero()) curls.push_back(c);
  }
  std::vector<int> keep = independent_subset(curls);
  std::vector<VectorPoly> out;
  out.reserve(keep.size());
  for (int i : keep) out.push_back(curls[i]);
  return out;
}

int dim_curl_plus_x(int r) { return (r + 2) * (r + 1) * (2 * r + 9) / 6 + 1; }

}  // namespace hexdiv
