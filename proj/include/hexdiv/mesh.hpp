// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "hexdiv/geometry.hpp"

namespace hexdiv {

struct MeshFace {
  std::array<int, 4> corners{};  // global vertex ids, owner's (p,q)-bit order
  int owner = -1;
  int owner_face = -1;  // local face index 0..5 on the owner
  int neighbor = -1;
  int neighbor_face = -1;
  bool boundary() const { return neighbor < 0; }
};

/// Conforming hexahedral mesh of [0,1]^3 with exact rational vertex
/// coordinates (faces are exactly flat by construction).
struct Mesh {
  std::string family;  // "cube", "trapezoid", "pillar", or "file"
  std::vector<Vec3> vertices;
  std::vector<RatVec3> vertices_rat;
  std::vector<std::array<int, 8>> cells;  // vertex ids in the x_{ijk} order
  std::vector<MeshFace> faces;
  std::vector<std::array<int, 6>> cell_faces;

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }

  Hexahedron cell_hex(int c) const;

  double max_diameter() const;
  /// Shape-regularity proxy: min over cells of (center-to-face distance) / diameter.
  double shape_regularity() const;

  /// Rebuild face connectivity from vertices+cells; throws NonConforming if an
  /// interior face is not shared by exactly two cells vertex-for-vertex.
  void build_faces();

  /// Construct every cell (validates admissibility; throws on failure).
  void validate_cells() const;
};

/// One 2x2x2 base pattern: cells as exact coordinates in [0,1]^3.
struct BasePattern {
  std::string family;
  std::vector<std::array<RatVec3, 8>> cells;
};

BasePattern cube_pattern();
BasePattern trapezoid_pattern();
BasePattern pillar_pattern();

/// Repeat a 2x2x2 base pattern n/2 times per axis, mirroring across the
/// pattern boundaries so shared faces match vertex-for-vertex.
Mesh refine(const BasePattern& base, int n);

Mesh gen_cube(int n);       // uniform n^3 cubes, n >= 1
Mesh gen_trapezoid(int n);  // lifted 2-D trapezoids, n even
Mesh gen_pillar(int n);     // truncated vertical pillars, n even

}  // namespace hexdiv
