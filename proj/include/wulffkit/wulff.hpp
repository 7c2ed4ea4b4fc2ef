#pragma once

#include "wulffkit/surface.hpp"

namespace wulffkit {

/// The level set {F*(x - center) = radius} of a gauge's dual.
struct WulffShape {
  std::shared_ptr<const AnisotropyGauge> gauge;
  Vector center;
  double radius = 1.0;
};

/// Closed Wulff shape as a parametrized patch (sphere atlas for d = 3, full
/// curve for d = 2), immersed through z -> center + radius grad F(z).
std::shared_ptr<ParametrizedPatch> wulff_patch(std::shared_ptr<const AnisotropyGauge> gauge,
                                               const Vector& center, double radius);

/// Wulff cap: the part of the shape kept by the cutter, with the trim curve
/// located by bisection along meridians.
std::shared_ptr<ParametrizedPatch> wulff_cap(std::shared_ptr<const AnisotropyGauge> gauge,
                                             const Vector& center, double radius,
                                             const Cutter& cutter);

struct TouchResult {
  enum class Stratum { Interior, BoundaryRegular, BoundaryEdge };
  double radius = 0.0;
  Vector point;                       // touch point on the surface
  Stratum stratum = Stratum::Interior;
  /// Max (inner touch) or min (outer touch) anisotropic principal curvature
  /// at the touch point.
  double curvature_certificate = 0.0;
  /// |y - (x - r nu_F(x))| for interior inner touches; NaN otherwise.
  double reconstruction_error = std::numeric_limits<double>::quiet_NaN();
  int sample_index = -1;
  int tie_count = 0;  // samples within 1e-12 of the extremal radius
};

/// First-touch radius of the expanding Wulff family centered at y:
/// min over the surface of F*(x - y), refined by a trust-region search on the
/// parameter chart (20 iterations). Requires y strictly inside the enclosed
/// region (parity test) unless skip_inside_check is set by a caller that has
/// already verified it. The container, when given, resolves the boundary
/// stratum of the touch point.
TouchResult inner_touch(const AnisotropyGauge& gauge, const QuadraturedSurface& surface,
                        const Vector& y, const ConvexContainer* container = nullptr,
                        bool skip_inside_check = false);

/// Smallest circumscribed Wulff radius around the origin point:
/// max over the surface of F*(x - origin), refined as above. The curvature
/// certificate at the argmax is the minimum anisotropic principal curvature,
/// which witnesses an elliptic point when it reaches 1/radius.
TouchResult outer_touch(const AnisotropyGauge& gauge, const QuadraturedSurface& surface,
                        const Vector& origin, const ConvexContainer* container = nullptr);

}  // namespace wulffkit
