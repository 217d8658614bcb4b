// SPDX-License-Identifier: Apache-2.0
#include "hexdiv/random_hex.hpp"

#include <Eigen/Eigenvalues>

namespace hexdiv {

namespace {

double face_deviation(const std::array<Vec3, 8>& verts, int f) {
  auto ci = face_corner_indices(f);
  Vec3 c = Vec3::Zero();
  for (int k = 0; k < 4; ++k) c += verts[ci[k]];
  c /= 4.0;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (int k = 0; k < 4; ++k) {
    Vec3 d = verts[ci[k]] - c;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  Vec3 n = es.eigenvectors().col(0);
  double dev = 0;
  for (int k = 0; k < 4; ++k) dev = std::max(dev, std::abs((verts[ci[k]] - c).dot(n)));
  return dev;
}

void project_face(std::array<Vec3, 8>& verts, int f) {
  auto ci = face_corner_indices(f);
  Vec3 c = Vec3::Zero();
  for (int k = 0; k < 4; ++k) c += verts[ci[k]];
  c /= 4.0;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (int k = 0; k < 4; ++k) {
    Vec3 d = verts[ci[k]] - c;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  Vec3 n = es.eigenvectors().col(0);
  for (int k = 0; k < 4; ++k) {
    Vec3& v = verts[ci[k]];
    v -= ((v - c).dot(n)) * n;
  }
}

}  // namespace

void flatten_faces(std::array<Vec3, 8>& verts) {
  for (int sweep = 0; sweep < 400; ++sweep) {
    for (int f = 0; f < 6; ++f) project_face(verts, f);
    double worst = 0;
    for (int f = 0; f < 6; ++f) worst = std::max(worst, face_deviation(verts, f));
    if (worst < 1e-15) return;
  }
}

Hexahedron random_hex(std::mt19937_64& rng, double amplitude) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::array<Vec3, 8> v;
    for (int i = 0; i < 8; ++i) {
      Vec3 base(i & 1, (i >> 1) & 1, (i >> 2) & 1);
      Vec3 off(uniform01(rng), uniform01(rng), uniform01(rng));
      v[i] = base + amplitude * (2.0 * off - Vec3::Ones());
    }
    flatten_faces(v);
    try {
      return Hexahedron(v);
    } catch (const Error&) {
      continue;
    }
  }
  throw DegenerateElement("random_hex: no admissible draw in 1000 attempts");
}

}  // namespace hexdiv
