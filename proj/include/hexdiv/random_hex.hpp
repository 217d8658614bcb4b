// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "hexdiv/geometry.hpp"

namespace hexdiv {

/// Deterministic uniform double in [0,1) from raw mt19937_64 bits
/// (std::uniform_real_distribution is not bit-portable across libraries).
inline double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

/// Random admissible hexahedron: the unit cube with vertices perturbed by
/// uniform offsets up to `amplitude`, faces re-flattened by iterated
/// projection onto their least-squares planes, then admissibility-filtered
/// (retries draws until the element validates).
Hexahedron random_hex(std::mt19937_64& rng, double amplitude = 0.2);

/// Project the face vertices of `verts` onto per-face least-squares planes,
/// sweeping all six faces until every face is flat to near machine precision.
void flatten_faces(std::array<Vec3, 8>& verts);

}  // namespace hexdiv
