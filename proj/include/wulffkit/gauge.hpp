#pragma once

#include "wulffkit/common.hpp"

namespace wulffkit {

/// Orthonormal basis of the tangent space of the unit sphere at a point.
struct TangentFrame {
  Vector base;   // unit vector z
  Matrix basis;  // d x (d-1), orthonormal columns, each orthogonal to base

  /// Deterministic frame at z (|z| = 1 within 1e-10).
  static TangentFrame at(const Vector& z);
};

/// One Legendre-type perturbation term: amplitude * |xi| * P_degree(<xi^, axis>).
struct PerturbationTerm {
  int degree = 2;
  Vector axis;
  double amplitude = 0.0;
};

/// A positive, one-homogeneous, uniformly convex direction-dependent weight
/// ("gauge"). Four concrete families are provided:
///
///   isotropic     F(xi) = |xi|
///   ellipsoidal   F(xi) = sqrt(xi' M xi), M symmetric positive definite
///   capillary     F(xi) = |xi| - cos(theta) <xi, e>,  theta in (0, pi)
///   perturbed     base family plus Legendre-polynomial terms in <xi^, axis>
///
/// Values, Euclidean gradients and Hessians of the homogeneous extension are
/// available either in closed form (analytic mode) or through finite
/// differences of great-circle restrictions (finite-difference mode).
/// Construction verifies positivity and uniform convexity (the spherical
/// Hessian plus F times the metric must be positive definite) on a sample
/// grid and throws Error(NotConvex) otherwise. Gauges are immutable and safe
/// to evaluate concurrently.
class AnisotropyGauge {
 public:
  enum class Family { Isotropic, Ellipsoidal, Capillary, Perturbed };

  static AnisotropyGauge isotropic(int dimension);
  static AnisotropyGauge ellipsoidal(const Matrix& metric);
  static AnisotropyGauge capillary(double contact_angle, const Vector& axis);
  static AnisotropyGauge perturbed(const AnisotropyGauge& base,
                                   std::vector<PerturbationTerm> terms);

  /// Same gauge with derivatives evaluated by central differences along
  /// great-circle restrictions (step h; second derivatives use a five-point
  /// stencil). Values are unchanged.
  AnisotropyGauge with_finite_differences(double step) const;

  int dimension() const { return dimension_; }
  Family family() const { return family_; }
  bool is_isotropic() const { return family_ == Family::Isotropic; }
  bool analytic_derivatives() const { return analytic_; }
  double fd_step() const { return fd_step_; }

  /// One-homogeneous value; throws ZeroVector for |xi| < 1e-14.
  double operator()(const Vector& xi) const;

  /// Euclidean gradient of the homogeneous extension (0-homogeneous).
  Vector gradient(const Vector& xi) const;

  /// Euclidean Hessian of the homogeneous extension ((-1)-homogeneous);
  /// annihilates the radial direction.
  Matrix hessian(const Vector& xi) const;

  /// grad F(z) + F(z) z for unit z; parametrizes the unit Wulff shape by its
  /// Euclidean normal. Throws NonUnitInput if |z| deviates from 1 by > 1e-10.
  Vector cahn_hoffman(const Vector& z) const;

  /// Spherical Hessian plus F times the metric, expressed in the frame.
  Matrix anisotropy_form(const TangentFrame& frame) const;

  /// Minimum eigenvalue of the anisotropy form over a quasi-uniform sphere
  /// grid (Fibonacci points for d = 3, uniform angles for d = 2) followed by
  /// a local pattern-search refinement; positive iff the gauge is admissible
  /// at that resolution. grid_resolution >= 8.
  double convexity_margin(int grid_resolution) const;

  /// Dual gauge F*(x) = sup_z <x,z>/F(z); closed form for the isotropic,
  /// ellipsoidal and capillary families, multistart projected ascent
  /// otherwise.
  double dual(const Vector& x) const;

  /// Dual gauge by multistart projected gradient ascent regardless of family
  /// (32 quasi-uniform starts, backtracking line search, stop when the step
  /// falls below 1e-12 or the Riemannian gradient below 1e-10).
  double dual_numeric(const Vector& x) const;

  const std::vector<PerturbationTerm>& perturbation_terms() const { return terms_; }
  const Matrix& ellipsoid_metric() const { return metric_; }
  double capillary_angle() const { return angle_; }
  const Vector& capillary_axis() const { return axis_; }
  Family base_family() const { return base_family_; }

 private:
  AnisotropyGauge() = default;
  void validate_convexity() const;

  double value_unit(const Vector& z) const;  // value on the sphere
  Vector analytic_gradient(const Vector& xi) const;
  Matrix analytic_hessian(const Vector& xi) const;
  Vector fd_gradient(const Vector& z) const;
  Matrix fd_form(const TangentFrame& frame) const;

  Family family_ = Family::Isotropic;
  Family base_family_ = Family::Isotropic;  // for perturbed gauges
  int dimension_ = 3;
  bool analytic_ = true;
  double fd_step_ = 1e-4;

  Matrix metric_;       // ellipsoidal
  Matrix metric_inv_;   // cached inverse
  double angle_ = 0.0;  // capillary contact angle
  Vector axis_;         // capillary axis (unit)
  std::vector<PerturbationTerm> terms_;
};

/// Support-function monotonicity margin along sphere geodesics:
/// <Phi(y) - Phi(x), z> for y on the minimizing geodesic from x to z.
/// Nonnegative for every admissible gauge, zero exactly when x = y.
/// Validates coplanarity and ordering of the triple within 1e-8 and throws
/// NotOnGeodesic otherwise.
double geodesic_support_check(const AnisotropyGauge& gauge, const Vector& x,
                              const Vector& y, const Vector& z);

/// Quasi-uniform unit directions: Fibonacci sphere for d = 3, uniform angles
/// for d = 2.
std::vector<Vector> quasi_uniform_directions(int dimension, int count);

}  // namespace wulffkit
