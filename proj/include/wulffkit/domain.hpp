#pragma once

#include "wulffkit/gauge.hpp"

#include <optional>

namespace wulffkit {

struct BoundaryTrace;  // surface.hpp

struct HalfSpaceSpec {
  Vector normal;  // unit outward normal, {x : <normal, x> <= offset}
  double offset = 0.0;
};

/// Where a point sits relative to the boundary strata of a convex container:
/// interior, a single smooth facet (with its outward normal), the relative
/// interior of the intersection of exactly two facets (both normals), a
/// deeper singularity (vertex or worse), or outside.
struct StratumLabel {
  enum class Kind { Interior, Regular, Edge, HigherSingular, Outside };
  Kind kind = Kind::Interior;
  Vector normal;   // Regular and Edge
  Vector normal2;  // Edge only
};

/// A stratified convex container: half-space, ball, circular cone, cone over
/// a spherical polygon, polytope, or wedge. Classification is distance-based
/// with tolerance tau (default 1e-7 times the container scale). Containers
/// are immutable and classification is pure.
class ConvexContainer {
 public:
  enum class Kind { HalfSpace, Ball, CircularCone, Polytope, Wedge };

  static ConvexContainer half_space(const Vector& normal, double offset,
                                    std::optional<double> tau = {});
  static ConvexContainer ball(const Vector& center, double radius,
                              std::optional<double> tau = {});
  static ConvexContainer circular_cone(const Vector& vertex, const Vector& axis,
                                       double half_angle, std::optional<double> tau = {});
  /// Cone over the spherical polygon with the given unit vertices (ordered,
  /// counterclockwise as seen from outside); realized as an intersection of
  /// half-spaces through the cone vertex.
  static ConvexContainer cone_over_polygon(const Vector& vertex,
                                           const std::vector<Vector>& sector_vertices,
                                           std::optional<double> tau = {});
  /// Irredundant intersection of half-spaces with nonempty interior; both
  /// properties are verified at construction by linear programming.
  static ConvexContainer polytope(std::vector<HalfSpaceSpec> facets,
                                  std::optional<double> tau = {});
  static ConvexContainer wedge(const HalfSpaceSpec& a, const HalfSpaceSpec& b,
                               std::optional<double> tau = {});

  Kind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  double tau() const { return tau_; }
  double scale() const { return scale_; }

  StratumLabel classify(const Vector& x) const;
  bool contains(const Vector& x) const;

  /// A point strictly inside the container (Chebyshev-style for polytopes).
  const Vector& interior_point() const { return interior_point_; }

  /// Dihedral angle between the two facets (wedges only).
  double dihedral_angle() const;

  const std::vector<HalfSpaceSpec>& facets() const { return facets_; }
  const Vector& cone_vertex() const { return vertex_; }
  const Vector& cone_axis() const { return axis_; }
  double cone_half_angle() const { return half_angle_; }
  const Vector& ball_center() const { return center_; }
  double ball_radius() const { return radius_; }

  /// Does the container have a distinguished apex (cones) or singular edge
  /// line (wedges) that equality diagnostics should compare centers against?
  std::optional<Vector> apex() const;
  /// Distance from x to the singular set (cone apex or wedge edge line), if any.
  std::optional<double> singular_set_distance(const Vector& x) const;
  /// The point nearest to the reference from which the container is a cone
  /// (cone vertex; any wall point of a half-space; any edge point of a
  /// wedge). Empty when the container is not a cone from anywhere (balls,
  /// boxes).
  std::optional<Vector> nearest_apex(const Vector& reference) const;

 private:
  ConvexContainer() = default;
  void finish(std::optional<double> tau);

  Kind kind_ = Kind::HalfSpace;
  int dimension_ = 3;
  double tau_ = 1e-7;
  double scale_ = 1.0;
  std::vector<HalfSpaceSpec> facets_;
  Vector vertex_, axis_;
  double half_angle_ = 0.0;
  Vector center_;
  double radius_ = 0.0;
  Vector interior_point_;
  bool cone_as_polytope_ = false;  // polytope facets all pass through vertex_
};

/// Residual record for the boundary-contact conditions a hypersurface must
/// satisfy inside a container. In anisotropic mode every boundary sample must
/// sit on a smooth facet; edge contact is only meaningful isotropically.
struct AdmissibilityReport {
  double max_anisotropic_normal_product = 0.0;  // max <nu_F, N> over Regular samples
  double max_edge_normal_product = 0.0;         // max <nu, N_alpha> over Edge samples
  double free_boundary_residual = 0.0;          // max |<nu_F, N>|
  double transversality_margin = 0.0;           // min angle between surface and wall
  double conormal_alignment_residual = 0.0;     // how far mu_F is from parallel to N
  int regular_samples = 0;
  int edge_samples = 0;

  bool admissible(double tolerance = 1e-6) const {
    return max_anisotropic_normal_product <= tolerance &&
           max_edge_normal_product <= tolerance;
  }
};

/// Evaluates the boundary-contact residuals of a trace against a container.
/// Throws SingularBoundaryContact if any sample leaves the two admissible
/// strata, and AnisotropicOnEdge if a non-isotropic gauge meets an edge.
AdmissibilityReport admissibility_report(const AnisotropyGauge& gauge,
                                         const BoundaryTrace& trace,
                                         const ConvexContainer& container);

/// Max deviation of mu_F/|mu_F| from sin(theta) N + cos(theta) nu_bar along
/// the boundary, where nu_bar is the outward co-normal of the boundary curve
/// inside the container wall.
double capillary_residual(const BoundaryTrace& trace, const ConvexContainer& container,
                          double contact_angle);

/// The two edge-touch consistency inequalities for a wedge of dihedral angle
/// alpha and contact angles eta1, eta2 against the facets:
/// cos(eta2) + cos(eta1) cos(alpha) >= 0 and the symmetric counterpart.
/// Both true means an edge first-touch is geometrically consistent; any false
/// certifies the exclusion.
std::pair<bool, bool> wedge_touch_inequalities(double eta1, double eta2, double alpha);

}  // namespace wulffkit
