#include "wulffcurv/mesh.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include "wulffcurv/error.hpp"
#include "wulffcurv/parallel.hpp"

namespace wulffcurv {
namespace {

struct SphereTriangulation {
  std::vector<Eigen::Vector3d> points;
  std::vector<std::array<int, 3>> faces;
};

SphereTriangulation icosahedron() {
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  SphereTriangulation t;
  const double raw[12][3] = {{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
                             {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
  for (const auto& p : raw) t.points.push_back(Eigen::Vector3d(p[0], p[1], p[2]).normalized());
  t.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& f : t.faces) {
    const auto& a = t.points[f[0]];
    const auto& b = t.points[f[1]];
    const auto& c = t.points[f[2]];
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) std::swap(f[1], f[2]);
  }
  return t;
}

SphereTriangulation subdivide(const SphereTriangulation& in) {
  SphereTriangulation out;
  out.points = in.points;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    const auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    out.points.push_back((in.points[a] + in.points[b]).normalized());
    const int idx = static_cast<int>(out.points.size()) - 1;
    midpoint.emplace(key, idx);
    return idx;
  };
  for (const auto& f : in.faces) {
    const int ab = mid(f[0], f[1]);
    const int bc = mid(f[1], f[2]);
    const int ca = mid(f[2], f[0]);
    out.faces.push_back({f[0], ab, ca});
    out.faces.push_back({f[1], bc, ab});
    out.faces.push_back({f[2], ca, bc});
    out.faces.push_back({ab, bc, ca});
  }
  return out;
}

}  // namespace

double SurfaceMesh::total_area() const { return pairwise_sum(face_areas); }

SurfaceMesh build_mesh(const ParametricSurface& surface, int subdiv) {
  if (surface.dimension() != 2) fail(ErrorKind::InvalidArgument, "meshes are built for n = 2 only");
  if (subdiv < 0 || subdiv > 8) fail(ErrorKind::InvalidArgument, "subdivision level out of range");
  SphereTriangulation t = icosahedron();
  for (int k = 0; k < subdiv; ++k) t = subdivide(t);

  SurfaceMesh mesh;
  const std::size_t nv = t.points.size();
  mesh.directions.resize(nv);
  mesh.vertices.resize(nv);
  mesh.frames.resize(nv);
  parallel_for(nv, [&](std::size_t k) {
    mesh.directions[k] = Vec(t.points[k]);
    mesh.frames[k] = frame_at(surface, mesh.directions[k]);
    mesh.vertices[k] = Eigen::Vector3d(mesh.frames[k].position);
  });
  mesh.triangles = std::move(t.faces);
  mesh.face_areas.resize(mesh.triangles.size());
  mesh.face_normals.resize(mesh.triangles.size());
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    const auto& tri = mesh.triangles[f];
    const Eigen::Vector3d c = (mesh.vertices[tri[1]] - mesh.vertices[tri[0]]).cross(mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
    mesh.face_areas[f] = 0.5 * c.norm();
    mesh.face_normals[f] = c.normalized();
  }
  check_topology(mesh);
  return mesh;
}

void check_topology(const SurfaceMesh& mesh) {
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    const auto& tri = mesh.triangles[f];
    if (!(mesh.face_areas[f] > 1e-14)) fail(ErrorKind::TopologyError, "degenerate face " + std::to_string(f));
    for (int e = 0; e < 3; ++e) {
      const std::pair<int, int> edge{tri[e], tri[(e + 1) % 3]};
      if (++directed[edge] > 1) fail(ErrorKind::TopologyError, "inconsistent orientation or non-manifold edge");
    }
  }
  for (const auto& [edge, count] : directed) {
    if (!directed.contains({edge.second, edge.first})) {
      fail(ErrorKind::TopologyError, "boundary edge (" + std::to_string(edge.first) + "," +
                                         std::to_string(edge.second) + ")");
    }
  }
}

void write_obj(const SurfaceMesh& mesh, std::ostream& out) {
  out.precision(12);
  out << "# wulffcurv mesh: " << mesh.vertex_count() << " vertices, " << mesh.face_count() << " faces\n";
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : mesh.triangles) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void write_vertex_scalars(std::span<const double> values, std::ostream& out) {
  out.precision(12);
  out << "# one value per OBJ vertex\n";
  for (double v : values) out << v << '\n';
}

}  // namespace wulffcurv
