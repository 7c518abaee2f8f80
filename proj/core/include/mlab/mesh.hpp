#pragma once

#include <array>
#include <string>
#include <vector>

#include "mlab/immersion.hpp"

namespace mlab {

// Triangulated surface carrying curvature data sampled from the analytic
// immersion at every vertex.
struct SurfaceMesh {
  AmbientSpace ambient = AmbientSpace::euclidean(3);
  std::string label;
  std::vector<AmbientVector> vertices;
  std::vector<std::array<int, 3>> triangles;
  // Per vertex: distance to the default pole, sigma_0..sigma_m and the Newton
  // tensors T_0..T_m as ambient bilinear forms S E T E^T S (S the signature,
  // E the orthonormal tangent frame).
  std::vector<double> r;
  std::vector<std::vector<double>> sigma;
  std::vector<std::vector<AmbientMatrix>> newton;
  int m = 2;

  std::size_t size() const { return vertices.size(); }
  double area() const;
  // Gram matrix of the two edges from vertex 0 of triangle t.
  Eigen::Matrix2d gram(std::size_t t) const;
  // Longest edge length.
  double max_edge() const;
};

struct MeshQuality {
  bool watertight = false;
  bool oriented = false;
  double min_angle_deg = 0.0;
  bool ok() const { return watertight && oriented && min_angle_deg > 1.0; }
};
MeshQuality inspect(const SurfaceMesh& mesh);

// Structured triangulation of the parameter grid of a surface (m = 2) with
// roughly `target_vertices` vertices. Periodic axes are wrapped and collapsed
// boundary rows (poles) are merged into single vertices.
SurfaceMesh triangulate(const Immersion& imm, int target_vertices);

// OFF geometry with a JSON sidecar holding the per-vertex curvature data.
void write_off(const SurfaceMesh& mesh, const std::string& off_path, const std::string& sidecar_path);
SurfaceMesh read_off(const std::string& off_path, const std::string& sidecar_path);

}  // namespace mlab
