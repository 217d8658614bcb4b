// SPDX-License-Identifier: Apache-2.0
#include "hexdiv/mesh.hpp"

#include <algorithm>
#include <map>

namespace hexdiv {

Hexahedron Mesh::cell_hex(int c) const {
  std::array<RatVec3, 8> v;
  for (int k = 0; k < 8; ++k) v[k] = vertices_rat[cells[c][k]];
  return Hexahedron(v);
}

double Mesh::max_diameter() const {
  double h = 0;
  for (const auto& cell : cells)
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b)
        h = std::max(h, (vertices[cell[a]] - vertices[cell[b]]).norm());
  return h;
}

double Mesh::shape_regularity() const {
  double worst = 1e300;
  for (int c = 0; c < n_cells(); ++c) {
    Hexahedron hex = cell_hex(c);
    Vec3 center = hex.center();
    double inr = 1e300;
    for (int f = 0; f < 6; ++f) {
      auto ci = face_corner_indices(f);
      inr = std::min(inr, std::abs((center - hex.vertex(ci[0])).dot(hex.face(f).normal)));
    }
    worst = std::min(worst, inr / hex.diameter());
  }
  return worst;
}

void Mesh::build_faces() {
  faces.clear();
  cell_faces.assign(cells.size(), {-1, -1, -1, -1, -1, -1});
  std::map<std::array<int, 4>, int> lookup;
  for (int c = 0; c < n_cells(); ++c) {
    for (int f = 0; f < 6; ++f) {
      auto ci = face_corner_indices(f);
      std::array<int, 4> corners{cells[c][ci[0]], cells[c][ci[1]], cells[c][ci[2]],
                                 cells[c][ci[3]]};
      std::array<int, 4> key = corners;
      std::sort(key.begin(), key.end());
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        MeshFace mf;
        mf.corners = corners;
        mf.owner = c;
        mf.owner_face = f;
        int id = static_cast<int>(faces.size());
        faces.push_back(mf);
        lookup.emplace(key, id);
        cell_faces[c][f] = id;
      } else {
        MeshFace& mf = faces[it->second];
        if (mf.neighbor >= 0)
          throw NonConforming("face shared by more than two cells");
        mf.neighbor = c;
        mf.neighbor_face = f;
        cell_faces[c][f] = it->second;
      }
    }
  }
}

void Mesh::validate_cells() const {
  for (int c = 0; c < n_cells(); ++c) (void)cell_hex(c);
}

// --- base patterns ----------------------------------------------------------------

namespace {

std::array<RatVec3, 8> lattice_cell(const Rat& x0, const Rat& x1, const Rat& y0, const Rat& y1,
                                    const Rat& z0, const Rat& z1) {
  std::array<RatVec3, 8> v;
  for (int i = 0; i < 8; ++i) {
    v[i][0] = (i & 1) ? x1 : x0;
    v[i][1] = (i & 2) ? y1 : y0;
    v[i][2] = (i & 4) ? z1 : z0;
  }
  return v;
}

}  // namespace

BasePattern cube_pattern() {
  BasePattern p;
  p.family = "cube";
  const Rat h(1, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        p.cells.push_back(
            lattice_cell(Rat(a) * h, Rat(a + 1) * h, Rat(b) * h, Rat(b + 1) * h, Rat(c) * h,
                         Rat(c + 1) * h));
  return p;
}

BasePattern trapezoid_pattern() {
  // 2-D trapezoids (two vertical parallel edges, alternating slant), lifted
  // in the third direction: two pairs of parallel faces per cell.
  BasePattern p;
  p.family = "trapezoid";
  const Rat xs[3] = {Rat(0), Rat(1, 2), Rat(1)};
  const Rat hmid[3] = {Rat(5, 8), Rat(3, 8), Rat(5, 8)};
  const Rat zs[3] = {Rat(0), Rat(1, 2), Rat(1)};
  auto node = [&](int col, int row) {
    RatVec3 q{xs[col], Rat(0), Rat(0)};
    if (row == 1) q[1] = hmid[col];
    if (row == 2) q[1] = Rat(1);
    return q;
  };
  for (int layer = 0; layer < 2; ++layer)
    for (int row = 0; row < 2; ++row)
      for (int col = 0; col < 2; ++col) {
        std::array<RatVec3, 8> v;
        for (int i = 0; i < 8; ++i) {
          RatVec3 q = node(col + ((i & 1) ? 1 : 0), row + ((i & 2) ? 1 : 0));
          q[2] = zs[layer + ((i & 4) ? 1 : 0)];
          v[i] = q;
        }
        p.cells.push_back(v);
      }
  return p;
}

BasePattern pillar_pattern() {
  // truncated vertical pillars: a 2-D cross-section mesh with no parallel
  // edges per quad, extruded vertically and cut by a tilted interior plane
  BasePattern p;
  p.family = "pillar";
  using V2 = std::array<Rat, 2>;
  const V2 c00{Rat(0), Rat(0)}, c10{Rat(1), Rat(0)}, c01{Rat(0), Rat(1)}, c11{Rat(1), Rat(1)};
  const V2 eb{Rat(5, 8), Rat(0)};     // bottom edge node
  const V2 et{Rat(7, 16), Rat(1)};    // top edge node
  const V2 el{Rat(0), Rat(9, 16)};    // left edge node
  const V2 er{Rat(1), Rat(13, 32)};   // right edge node
  const V2 cc{Rat(17, 32), Rat(15, 32)};
  // quads in (b0,b1) corner order q00,q10,q01,q11
  const std::array<std::array<V2, 4>, 4> quads{{{c00, eb, el, cc},
                                                {eb, c10, cc, er},
                                                {el, cc, c01, et},
                                                {cc, er, et, c11}}};
  auto zmid = [](const V2& q) {
    return Rat(1, 2) + (q[0] - Rat(1, 2)) / 8 - (q[1] - Rat(1, 2)) / 16;
  };
  for (int layer = 0; layer < 2; ++layer)
    for (const auto& q : quads) {
      std::array<RatVec3, 8> v;
      for (int i = 0; i < 8; ++i) {
        const V2& n2 = q[i & 3];
        v[i][0] = n2[0];
        v[i][1] = n2[1];
        bool top = (i & 4) != 0;
        if (layer == 0)
          v[i][2] = top ? zmid(n2) : Rat(0);
        else
          v[i][2] = top ? Rat(1) : zmid(n2);
      }
      p.cells.push_back(v);
    }
  return p;
}

// --- refinement by mirrored repetition ----------------------------------------------

Mesh refine(const BasePattern& base, int n) {
  if (n < 2 || n % 2 != 0) throw OddSubdivision("refine: n must be a positive multiple of 2");
  const int k = n / 2;
  Mesh mesh;
  mesh.family = base.family;
  std::map<RatVec3, int> node_of;
  auto add_node = [&](const RatVec3& q) {
    auto it = node_of.find(q);
    if (it != node_of.end()) return it->second;
    int id = static_cast<int>(mesh.vertices_rat.size());
    node_of.emplace(q, id);
    mesh.vertices_rat.push_back(q);
    mesh.vertices.emplace_back(to_double(q[0]), to_double(q[1]), to_double(q[2]));
    return id;
  };

  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        const int blk[3] = {a, b, c};
        int mask = (a % 2) | ((b % 2) << 1) | ((c % 2) << 2);
        for (const auto& cell : base.cells) {
          std::array<int, 8> ids;
          for (int i = 0; i < 8; ++i) {
            // mirrored axes flip the pattern coordinate and the index bit
            const RatVec3& src = cell[i ^ mask];
            RatVec3 q;
            for (int ax = 0; ax < 3; ++ax) {
              Rat pc = (mask >> ax) & 1 ? Rat(1) - src[ax] : src[ax];
              q[ax] = (Rat(blk[ax]) + pc) / k;
            }
            ids[i] = add_node(q);
          }
          mesh.cells.push_back(ids);
        }
      }
  mesh.build_faces();
  return mesh;
}

Mesh gen_cube(int n) {
  if (n < 1) throw OddSubdivision("gen_cube: n must be >= 1");
  Mesh mesh;
  mesh.family = "cube";
  auto id = [&](int i, int j, int l) { return (l * (n + 1) + j) * (n + 1) + i; };
  for (int l = 0; l <= n; ++l)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        mesh.vertices_rat.push_back({Rat(i, n), Rat(j, n), Rat(l, n)});
        mesh.vertices.emplace_back(double(i) / n, double(j) / n, double(l) / n);
      }
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        std::array<int, 8> cell;
        for (int v = 0; v < 8; ++v)
          cell[v] = id(i + (v & 1), j + ((v >> 1) & 1), l + ((v >> 2) & 1));
        mesh.cells.push_back(cell);
      }
  mesh.build_faces();
  return mesh;
}

Mesh gen_trapezoid(int n) {
  if (n < 2 || n % 2 != 0) throw OddSubdivision("gen_trapezoid: n must be even");
  return refine(trapezoid_pattern(), n);
}

Mesh gen_pillar(int n) {
  if (n < 2 || n % 2 != 0) throw OddSubdivision("gen_pillar: n must be even");
  return refine(pillar_pattern(), n);
}

}  // namespace hexdiv
