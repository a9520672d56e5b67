#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "wulffcurv/geometry.hpp"

namespace wulffcurv {

/// Triangulated closed surface (n = 2). Vertex k is the image of the sphere
/// direction `directions[k]` under the surface parametrization and carries
/// the exact PointFrame of the smooth surface there.
struct SurfaceMesh {
  std::vector<Vec> directions;
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<PointFrame> frames;
  std::vector<double> face_areas;
  /// Unit face normals following the triangle winding (outward).
  std::vector<Eigen::Vector3d> face_normals;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return triangles.size(); }
  double total_area() const;
};

/// Icosahedron subdivided `subdiv` times; 20 * 4^subdiv triangles.
SurfaceMesh build_mesh(const ParametricSurface& surface, int subdiv);

/// Throws TopologyError unless every edge is shared by exactly two triangles
/// with opposite directions and all faces have area > 1e-14.
void check_topology(const SurfaceMesh& mesh);

void write_obj(const SurfaceMesh& mesh, std::ostream& out);
/// Sidecar attribute file: one scalar per vertex, in OBJ vertex order.
void write_vertex_scalars(std::span<const double> values, std::ostream& out);

}  // namespace wulffcurv
