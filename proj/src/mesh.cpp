#include "wulffkit/mesh.hpp"

#include <cmath>
#include <fstream>

namespace wulffkit {

RegionTester::RegionTester(SurfaceMesh mesh) : mesh_(std::move(mesh)) {
  const int d = mesh_.dimension;
  Rng rng(0x9e3779b97f4a7c15ull);
  for (int i = 0; i < 32; ++i) ray_directions_.push_back(rng.unit_vector(d));
  box_min_ = mesh_.vertices.colwise().minCoeff().transpose();
  box_max_ = mesh_.vertices.colwise().maxCoeff().transpose();
  if (d == 3) {
    triangles_.reserve(mesh_.triangles.rows());
    for (int t = 0; t < mesh_.triangles.rows(); ++t) {
      TriangleData data;
      data.a = mesh_.vertices.row(mesh_.triangles(t, 0)).transpose();
      data.e1 = Eigen::Vector3d(mesh_.vertices.row(mesh_.triangles(t, 1)).transpose()) - data.a;
      data.e2 = Eigen::Vector3d(mesh_.vertices.row(mesh_.triangles(t, 2)).transpose()) - data.a;
      data.scale = data.e1.norm() * data.e2.norm();
      triangles_.push_back(data);
    }
  }
}

bool RegionTester::parity3(const Vector& origin, const Eigen::Vector3d& dir,
                           bool* degenerate) const {
  *degenerate = false;
  const Eigen::Vector3d o(origin[0], origin[1], origin[2]);
  long crossings = 0;
  for (const TriangleData& tri : triangles_) {
    const Eigen::Vector3d& a = tri.a;
    const Eigen::Vector3d& e1 = tri.e1;
    const Eigen::Vector3d& e2 = tri.e2;
    // Moller-Trumbore with conservative degeneracy flags.
    const Eigen::Vector3d p = dir.cross(e2);
    const double det = e1.dot(p);
    if (std::abs(det) < 1e-12 * tri.scale) continue;  // parallel: cannot cross
    const double inv = 1.0 / det;
    const Eigen::Vector3d tv = o - a;
    const double u = tv.dot(p) * inv;
    const Eigen::Vector3d q = tv.cross(e1);
    const double v = dir.dot(q) * inv;
    const double ray_t = e2.dot(q) * inv;
    const double eps = 1e-10;
    if (u < -eps || v < -eps || u + v > 1.0 + eps) continue;
    if (ray_t <= eps) {
      if (ray_t > -eps) {
        *degenerate = true;  // origin on the surface
        return false;
      }
      continue;
    }
    if (u < eps || v < eps || u + v > 1.0 - eps) {
      *degenerate = true;  // edge or vertex hit
      return false;
    }
    ++crossings;
  }
  return (crossings % 2) == 1;
}

bool RegionTester::parity2(const Vector& origin, const Eigen::Vector2d& dir,
                           bool* degenerate) const {
  *degenerate = false;
  const Eigen::Vector2d o(origin[0], origin[1]);
  const int n = static_cast<int>(mesh_.polyline.size());
  const int segments = mesh_.polyline_closed ? n : n - 1;
  long crossings = 0;
  for (int s = 0; s < segments; ++s) {
    const Eigen::Vector2d a = mesh_.vertices.row(mesh_.polyline[s]).transpose();
    const Eigen::Vector2d b = mesh_.vertices.row(mesh_.polyline[(s + 1) % n]).transpose();
    const Eigen::Vector2d e = b - a;
    const double det = dir.x() * (-e.y()) - dir.y() * (-e.x());
    if (std::abs(det) < 1e-14 * e.norm()) continue;
    const Eigen::Vector2d w = a - o;
    const double t = (w.x() * (-e.y()) - w.y() * (-e.x())) / det;
    const double s2 = (dir.x() * w.y() - dir.y() * w.x()) / det;
    const double eps = 1e-10;
    if (t <= eps) {
      if (t > -eps && s2 > -eps && s2 < 1.0 + eps) {
        *degenerate = true;
        return false;
      }
      continue;
    }
    if (s2 < -eps || s2 > 1.0 + eps) continue;
    if (s2 < eps || s2 > 1.0 - eps) {
      *degenerate = true;
      return false;
    }
    ++crossings;
  }
  return (crossings % 2) == 1;
}

bool RegionTester::contains(const Vector& point) const {
  for (const Vector& dir : ray_directions_) {
    bool degenerate = false;
    bool inside = false;
    if (mesh_.dimension == 3) {
      inside = parity3(point, Eigen::Vector3d(dir[0], dir[1], dir[2]), &degenerate);
    } else {
      inside = parity2(point, Eigen::Vector2d(dir[0], dir[1]), &degenerate);
    }
    if (!degenerate) return inside;
  }
  return false;  // persistently degenerate: treat as boundary, i.e. not inside
}

void write_obj(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << "o surface\n";
  out.precision(17);
  for (int i = 0; i < mesh.vertices.rows(); ++i) {
    out << "v";
    for (int k = 0; k < mesh.vertices.cols(); ++k) out << " " << mesh.vertices(i, k);
    if (mesh.vertices.cols() == 2) out << " 0";
    out << "\n";
  }
  for (int t = 0; t < mesh.triangles.rows(); ++t) {
    out << "f " << mesh.triangles(t, 0) + 1 << " " << mesh.triangles(t, 1) + 1 << " "
        << mesh.triangles(t, 2) + 1 << "\n";
  }
  if (!mesh.polyline.empty()) {
    out << "o curve\nl";
    for (const int idx : mesh.polyline) out << " " << idx + 1;
    if (mesh.polyline_closed) out << " " << mesh.polyline.front() + 1;
    out << "\n";
  }
  int loop_id = 0;
  for (const auto& loop : mesh.boundary_loops) {
    out << "o boundary_" << loop_id++ << "\nl";
    for (const int idx : loop) out << " " << idx + 1;
    out << " " << loop.front() + 1 << "\n";
  }
  if (!out) fail(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace wulffkit
