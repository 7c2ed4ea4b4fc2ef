#pragma once

#include "wulffkit/domain.hpp"
#include "wulffkit/surface.hpp"

namespace wulffkit {

/// Planar polyline (>= 64 vertices) with per-vertex tangent, outward normal
/// and curvature obtained from a three-point circumcircle fit. Everything in
/// this module is computed by elementary planar means (polylines, shoelace
/// sums, rasterized sweeps) independently of the generic machinery, so the
/// two paths can be checked against each other.
class PlanarCurve {
 public:
  static PlanarCurve closed_polyline(std::vector<Eigen::Vector2d> vertices);
  static PlanarCurve open_polyline(std::vector<Eigen::Vector2d> vertices);

  bool closed() const { return closed_; }
  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }

  Eigen::Vector2d tangent(int i) const;
  Eigen::Vector2d normal(int i) const { return flip_ * rot90(tangent(i)) * -1.0; }
  double curvature(int i) const;
  /// Arc-length weight of a vertex: half the adjacent segment lengths.
  double vertex_measure(int i) const;
  double perimeter() const;

  /// Flip the normal/curvature orientation (used to make normals outward
  /// with respect to an enclosed region).
  void flip() { flip_ = -flip_; }
  double orientation_flip() const { return flip_; }

 private:
  PlanarCurve() = default;
  void validate_simple() const;

  std::vector<Eigen::Vector2d> vertices_;
  bool closed_ = true;
  double flip_ = 1.0;
};

/// Absolute enclosed area by the shoelace formula. Open polylines are closed
/// along the container wall (straight chord for half-spaces, through the
/// vertex for cones and wedges) and require a container.
double shoelace_area(const PlanarCurve& curve, const ConvexContainer* container = nullptr);

/// Discrete integral of F(nu)/kappa^F over the curve divided by twice the
/// enclosed area; the planar analogue of the ratio produced by the generic
/// machinery. Requires positive curvature at every vertex.
double polygon_hk(const AnisotropyGauge& gauge, const PlanarCurve& curve,
                  const ConvexContainer* container = nullptr);

/// Rasterizes the enclosed region on a grid and marks every cell hit by the
/// parallel sweep x - t nu_F(x) over a fine lattice in (x, t); returns the
/// fraction of region cells covered.
double raster_sweep(const AnisotropyGauge& gauge, const PlanarCurve& curve,
                    const ConvexContainer* container, int grid_resolution);

/// Uniformly resampled polyline of a generic planar patch (bridges scenario
/// surfaces into the planar oracles).
PlanarCurve planar_curve_from_patch(const CurvePatch& patch, int n_vertices);

}  // namespace wulffkit
