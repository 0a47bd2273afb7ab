#include "depthkit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "depthkit/errors.hpp"

namespace depthkit {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

namespace {

bool edge_is_continuous(double za, double zb, double ratio) {
  return std::abs(za - zb) / std::min(za, zb) <= ratio;
}

}  // namespace

TriangleMesh grid_mesh(const DepthMap& depth, const Intrinsics& K, const MeshingConfig& cfg) {
  validate(K);
  if (!(cfg.discontinuity_ratio > 0.0)) {
    raise(ErrorCode::invalid_argument, "discontinuity_ratio: must be > 0");
  }
  if (depth.width() < 2 || depth.height() < 2) {
    raise(ErrorCode::invalid_argument, "grid_mesh: depth map must be at least 2x2");
  }

  const int w = depth.width();
  const int h = depth.height();

  // provisional vertex per valid pixel
  std::vector<std::int64_t> pixel_vertex(depth.size(), -1);
  std::vector<Vec3> verts;
  std::vector<std::array<int, 2>> vert_pixel;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!depth.valid_at(u, v)) continue;
      const double z = depth.at(u, v);
      pixel_vertex[depth.index(u, v)] = static_cast<std::int64_t>(verts.size());
      verts.push_back({(u - K.cx) * z / K.fx, (v - K.cy) * z / K.fy, z});
      vert_pixel.push_back({u, v});
    }
  }

  std::vector<std::array<std::uint32_t, 3>> tris;
  auto emit = [&](std::int64_t ia, std::int64_t ib, std::int64_t ic) {
    const Vec3& a = verts[ia];
    const Vec3& b = verts[ib];
    const Vec3& c = verts[ic];
    if (!edge_is_continuous(a.z, b.z, cfg.discontinuity_ratio) ||
        !edge_is_continuous(b.z, c.z, cfg.discontinuity_ratio) ||
        !edge_is_continuous(a.z, c.z, cfg.discontinuity_ratio)) {
      return;
    }
    if (triangle_area(a, b, c) < cfg.area_epsilon) return;
    std::array<std::uint32_t, 3> t = {static_cast<std::uint32_t>(ia),
                                      static_cast<std::uint32_t>(ib),
                                      static_cast<std::uint32_t>(ic)};
    // counter-clockwise from the origin: normal faces the camera
    if (dot(cross(b - a, c - a), a + b + c) > 0.0) std::swap(t[1], t[2]);
    tris.push_back(t);
  };

  for (int v = 0; v + 1 < h; ++v) {
    for (int u = 0; u + 1 < w; ++u) {
      const std::int64_t i00 = pixel_vertex[depth.index(u, v)];
      const std::int64_t i10 = pixel_vertex[depth.index(u + 1, v)];
      const std::int64_t i01 = pixel_vertex[depth.index(u, v + 1)];
      const std::int64_t i11 = pixel_vertex[depth.index(u + 1, v + 1)];
      if (i00 < 0 || i10 < 0 || i01 < 0 || i11 < 0) continue;
      const double d_main = std::abs(verts[i00].z - verts[i11].z);
      const double d_anti = std::abs(verts[i10].z - verts[i01].z);
      if (d_main <= d_anti) {
        emit(i00, i10, i11);
        emit(i00, i11, i01);
      } else {
        emit(i00, i10, i01);
        emit(i10, i11, i01);
      }
    }
  }

  // drop vertices with no surviving triangle
  std::vector<std::int64_t> remap(verts.size(), -1);
  TriangleMesh mesh;
  for (auto& t : tris) {
    for (auto& idx : t) {
      if (remap[idx] < 0) {
        remap[idx] = static_cast<std::int64_t>(mesh.vertices.size());
        mesh.vertices.push_back(verts[idx]);
        mesh.vertex_pixel.push_back(vert_pixel[idx]);
      }
      idx = static_cast<std::uint32_t>(remap[idx]);
    }
    mesh.triangles.push_back(t);
  }
  return mesh;
}

void export_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io, "export_mesh: cannot open " + path.string());
  char line[128];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(line, sizeof(line), "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    out << line;
  }
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  if (!out.flush()) raise(ErrorCode::io, "export_mesh: write failed for " + path.string());
}

TriangleMesh import_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io, "import_mesh: cannot open " + path.string());
  TriangleMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      ss >> v.x >> v.y >> v.z;
      if (!ss) raise(ErrorCode::parse, "import_mesh: bad vertex line: " + line);
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<std::uint32_t, 3> t;
      ss >> t[0] >> t[1] >> t[2];
      if (!ss) raise(ErrorCode::parse, "import_mesh: bad face line: " + line);
      for (auto& idx : t) {
        if (idx == 0 || idx > mesh.vertices.size()) {
          raise(ErrorCode::parse, "import_mesh: face index out of range: " + line);
        }
        --idx;  // 1-based on disk
      }
      mesh.triangles.push_back(t);
    }
  }
  return mesh;
}

}  // namespace depthkit
