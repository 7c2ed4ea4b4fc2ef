#pragma once

#include "wulffkit/surface.hpp"

#include <string>

namespace wulffkit {

/// Point-in-region parity tester over a watertight triangle mesh (d=3) or
/// closed polygon (d=2). Ray directions are drawn once from a fixed seed;
/// degenerate hits retry with the next precomputed direction, so queries are
/// deterministic and safe to issue from parallel workers.
class RegionTester {
 public:
  explicit RegionTester(SurfaceMesh mesh);

  bool contains(const Vector& point) const;
  const Vector& box_min() const { return box_min_; }
  const Vector& box_max() const { return box_max_; }
  int dimension() const { return mesh_.dimension; }

 private:
  bool parity3(const Vector& origin, const Eigen::Vector3d& dir, bool* degenerate) const;
  bool parity2(const Vector& origin, const Eigen::Vector2d& dir, bool* degenerate) const;

  struct TriangleData {
    Eigen::Vector3d a, e1, e2;
    double scale = 0.0;
  };

  SurfaceMesh mesh_;
  std::vector<TriangleData> triangles_;
  std::vector<Vector> ray_directions_;
  Vector box_min_, box_max_;
};

/// Writes the mesh as ASCII OBJ: vertices plus triangulated faces, with each
/// boundary loop emitted as a second object holding polyline elements.
void write_obj(const SurfaceMesh& mesh, const std::string& path);

}  // namespace wulffkit
