#pragma once

#include "wulffkit/domain.hpp"
#include "wulffkit/gauge.hpp"

#include <memory>
#include <mutex>

namespace wulffkit {

class RegionTester;

/// Position and parameter derivatives of an immersion at one point.
struct SurfaceJet {
  Vector x;                    // position in R^d
  Matrix tangents;             // d x n, columns dX/du_i
  std::vector<Vector> second;  // packed upper triangle: n=1 [uu]; n=2 [uu, uv, vv]
};

/// Classical first/second fundamental forms and the Weingarten map in the
/// parameter basis, with the sign convention that makes the Weingarten map of
/// the unit sphere (outward normal) the identity.
struct FundamentalForms {
  Matrix metric;      // I
  Matrix second;      // II, with dnu = I^{-1} II
  Vector normal;      // nu (oriented outward from the enclosed region)
  Matrix weingarten;  // I^{-1} II
};

/// One quadrature sample of a hypersurface: position, oriented normal, the
/// shape operator expressed in an orthonormal tangent frame, and the area
/// weight (including any partition-of-unity factor).
struct SurfaceSample {
  Vector x;
  Vector normal;
  Matrix frame;  // d x n orthonormal tangent basis
  Matrix dnu;    // n x n symmetric shape operator in the frame
  double weight = 0.0;
  double det_metric = 0.0;
  int chart = 0;
  Vector u;  // chart parameters
};

/// Quadrature sample on the wetted container face closing the region.
struct WettingSample {
  Vector x;
  Vector normal;  // outward from the enclosed region
  double weight = 0.0;
};

/// Arc-length (d=3) or counting-measure (d=2) sample of the surface boundary
/// carrying the outward co-normal and its anisotropic counterpart.
struct BoundarySample {
  Vector x;
  Vector mu;      // outward unit co-normal of the boundary inside the surface
  Vector normal;  // surface normal nu
  Vector nu_F;    // anisotropic normal
  Vector mu_F;    // F(nu) mu - <nu_F, mu> nu
  double F_nu = 0.0;
  double weight = 0.0;
};

struct BoundaryTrace {
  int dimension = 3;
  std::vector<BoundarySample> samples;
};

/// Triangle mesh (d=3) or polyline (d=2) discretization used for export and
/// point-in-region parity tests.
struct SurfaceMesh {
  int dimension = 3;
  Matrix vertices;                               // N x d
  Eigen::MatrixXi triangles;                     // M x 3 (d=3)
  std::vector<int> polyline;                     // ordered indices (d=2)
  bool polyline_closed = false;
  std::vector<std::vector<int>> boundary_loops;  // ordered indices into vertices
};

class ParametrizedPatch;

/// A sampled hypersurface: quadrature samples plus, for trimmed surfaces, the
/// quadrature of the wetted container face that closes the region.
class QuadraturedSurface {
 public:
  std::shared_ptr<const ParametrizedPatch> patch;
  std::vector<SurfaceSample> samples;
  std::vector<WettingSample> wetting;
  bool wetting_flux_zero = false;  // wetted face lies on planes/cones through the origin
  int resolution = 0;

  int dimension() const;
  double area() const;
  Vector normal_flux() const;    // integral of nu over the surface part
  double flux_closure_residual() const;
  /// Lazily built parity tester for the enclosed region (thread-safe build).
  const RegionTester& region_tester() const;

 private:
  mutable std::shared_ptr<const RegionTester> tester_;
};

/// Smooth map from unit directions into R^d defining a star-shaped surface;
/// jets of immersions are assembled from its value and Jacobian, with the
/// directional derivative of the Jacobian taken by central differences.
class AmbientMap {
 public:
  virtual ~AmbientMap() = default;
  virtual int dimension() const = 0;
  virtual Vector value(const Vector& z) const = 0;     // homogeneous extension
  virtual Matrix jacobian(const Vector& z) const = 0;  // of the extension
  virtual Vector center() const = 0;                   // star center
};

/// x0 + r grad F(z): parametrizes the Wulff shape of radius r by its normal.
class WulffMap : public AmbientMap {
 public:
  WulffMap(std::shared_ptr<const AnisotropyGauge> gauge, Vector center, double radius);
  int dimension() const override { return gauge_->dimension(); }
  Vector value(const Vector& z) const override;
  Matrix jacobian(const Vector& z) const override;
  Vector center() const override { return center_; }
  const AnisotropyGauge& gauge() const { return *gauge_; }
  double radius() const { return radius_; }

 private:
  std::shared_ptr<const AnisotropyGauge> gauge_;
  Vector center_;
  double radius_;
};

/// c + rho(z) z with a Legendre-polynomial radial profile
/// rho(z) = r0 + sum_k amplitude_k P_{degree_k}(<z, axis_k>).
class RadialMap : public AmbientMap {
 public:
  RadialMap(Vector center, double base_radius, std::vector<PerturbationTerm> terms);
  int dimension() const override { return static_cast<int>(center_.size()); }
  Vector value(const Vector& z) const override;
  Matrix jacobian(const Vector& z) const override;
  Vector center() const override { return center_; }

 private:
  double profile(const Vector& z, Vector* gradient) const;
  Vector center_;
  double base_radius_;
  std::vector<PerturbationTerm> terms_;
};

/// Region kept by a cap trim: HalfSpace keeps {<n,x> <= b}, Cone keeps the
/// inside of a circular cone.
struct Cutter {
  enum class Kind { HalfSpace, Cone };
  Kind kind = Kind::HalfSpace;
  HalfSpaceSpec half_space;
  Vector vertex, axis;
  double half_angle = 0.0;

  double value(const Vector& x) const;  // <= 0 on the kept side
  Vector gradient(const Vector& x) const;
  bool through_origin() const;
  static Cutter make_half_space(const Vector& normal, double offset);
  static Cutter make_cone(const Vector& vertex, const Vector& axis, double half_angle);
  /// Containers of kind HalfSpace or CircularCone convert directly.
  static Cutter from_container(const ConvexContainer& container);
};

/// Abstract parametrized hypersurface patch with derivative access. Concrete
/// patches supply their own quadrature, boundary sampling and meshing.
class ParametrizedPatch {
 public:
  virtual ~ParametrizedPatch() = default;
  virtual int ambient_dimension() const = 0;
  int tangent_dimension() const { return ambient_dimension() - 1; }
  virtual int chart_count() const = 0;
  virtual bool closed() const = 0;
  virtual SurfaceJet jet(int chart, const Vector& u) const = 0;
  virtual double orientation_sign(const Vector& x, const Vector& raw_normal) const = 0;

  virtual void build_samples(int resolution, std::vector<SurfaceSample>& samples,
                             std::vector<WettingSample>& wetting,
                             bool* wetting_flux_zero) const = 0;
  virtual BoundaryTrace build_boundary_trace(const AnisotropyGauge& gauge,
                                             int resolution) const;
  virtual SurfaceMesh surface_mesh(int resolution) const = 0;
  /// Watertight discretization of the enclosed region boundary (surface plus
  /// wetted face); closed patches return the surface mesh itself.
  virtual SurfaceMesh region_mesh(int resolution) const;
};

/// Full sphere image of an ambient map (two polar charts joined by a smooth
/// partition of unity) or a cap trimmed by a cutter (one polar chart whose
/// polar extent theta_max(phi) is located by bisection on the cutter
/// functional along meridians).
class SphereMappedPatch : public ParametrizedPatch {
 public:
  static std::shared_ptr<SphereMappedPatch> closed_surface(
      std::shared_ptr<const AmbientMap> map);
  static std::shared_ptr<SphereMappedPatch> cap(std::shared_ptr<const AmbientMap> map,
                                                const Cutter& cutter);

  int ambient_dimension() const override { return 3; }
  int chart_count() const override { return is_cap_ ? 1 : 2; }
  bool closed() const override { return !is_cap_; }
  SurfaceJet jet(int chart, const Vector& u) const override;
  double orientation_sign(const Vector& x, const Vector& raw_normal) const override;
  void build_samples(int resolution, std::vector<SurfaceSample>& samples,
                     std::vector<WettingSample>& wetting,
                     bool* wetting_flux_zero) const override;
  BoundaryTrace build_boundary_trace(const AnisotropyGauge& gauge,
                                     int resolution) const override;
  SurfaceMesh surface_mesh(int resolution) const override;
  SurfaceMesh region_mesh(int resolution) const override;

  const AmbientMap& map() const { return *map_; }
  /// Unit direction of the chart point (theta, phi).
  Vector direction(int chart, double theta, double phi) const;
  double theta_max(double phi) const;  // caps only
  void flip_orientation() { orientation_flip_ = !orientation_flip_; }

 private:
  SphereMappedPatch() = default;
  void chart_direction_jet(int chart, double theta, double phi, Vector& z, Vector& z_t,
                           Vector& z_p, Vector& z_tt, Vector& z_tp, Vector& z_pp) const;
  double locate_trim(double phi, double bracket_lo, double bracket_hi) const;

  std::shared_ptr<const AmbientMap> map_;
  bool is_cap_ = false;
  bool orientation_flip_ = false;
  std::optional<Cutter> cutter_;
  Matrix cap_frame_;            // columns b1, b2, axis
  double pou_halfwidth_ = 0.3;  // atlas partition-of-unity band half-width
  std::vector<double> trim_table_;  // theta_max at uniform phi nodes (caps)
};

/// Planar analogue: full closed curve or an arc trimmed by a cutter.
class CurvePatch : public ParametrizedPatch {
 public:
  static std::shared_ptr<CurvePatch> closed_curve(std::shared_ptr<const AmbientMap> map);
  static std::shared_ptr<CurvePatch> arc(std::shared_ptr<const AmbientMap> map,
                                         const Cutter& cutter);

  int ambient_dimension() const override { return 2; }
  int chart_count() const override { return 1; }
  bool closed() const override { return !is_arc_; }
  SurfaceJet jet(int chart, const Vector& u) const override;
  double orientation_sign(const Vector& x, const Vector& raw_normal) const override;
  void build_samples(int resolution, std::vector<SurfaceSample>& samples,
                     std::vector<WettingSample>& wetting,
                     bool* wetting_flux_zero) const override;
  BoundaryTrace build_boundary_trace(const AnisotropyGauge& gauge,
                                     int resolution) const override;
  SurfaceMesh surface_mesh(int resolution) const override;
  SurfaceMesh region_mesh(int resolution) const override;

  const AmbientMap& map() const { return *map_; }
  double theta_lo() const { return theta_lo_; }
  double theta_hi() const { return theta_hi_; }
  Vector direction(double theta) const;

 private:
  CurvePatch() = default;
  std::shared_ptr<const AmbientMap> map_;
  bool is_arc_ = false;
  std::optional<Cutter> cutter_;
  double theta_lo_ = 0.0, theta_hi_ = 2.0 * kPi;
};

/// Test-oriented immersion over a rectangle with caller-supplied jets
/// (graphs, cylinders, flat patches).
class RectanglePatch : public ParametrizedPatch {
 public:
  using JetFn = std::function<SurfaceJet(double, double)>;
  RectanglePatch(JetFn jet, double u0, double u1, double v0, double v1,
                 bool normal_positive_last);

  int ambient_dimension() const override { return 3; }
  int chart_count() const override { return 1; }
  bool closed() const override { return false; }
  SurfaceJet jet(int chart, const Vector& u) const override;
  double orientation_sign(const Vector& x, const Vector& raw_normal) const override;
  void build_samples(int resolution, std::vector<SurfaceSample>& samples,
                     std::vector<WettingSample>& wetting,
                     bool* wetting_flux_zero) const override;
  BoundaryTrace build_boundary_trace(const AnisotropyGauge& gauge,
                                     int resolution) const override;
  SurfaceMesh surface_mesh(int resolution) const override;

 private:
  JetFn jet_;
  double u0_, u1_, v0_, v1_;
  bool normal_positive_last_;
};

/// Graph z = f(u, v) over a disk of radius R, sampled in polar coordinates.
class DiskGraphPatch : public ParametrizedPatch {
 public:
  using Fn = std::function<double(double, double)>;
  /// f plus first and second partials (fu, fv, fuu, fuv, fvv).
  DiskGraphPatch(Fn f, Fn fu, Fn fv, Fn fuu, Fn fuv, Fn fvv, double radius,
                 bool normal_positive_last);

  int ambient_dimension() const override { return 3; }
  int chart_count() const override { return 1; }
  bool closed() const override { return false; }
  SurfaceJet jet(int chart, const Vector& u) const override;
  double orientation_sign(const Vector& x, const Vector& raw_normal) const override;
  void build_samples(int resolution, std::vector<SurfaceSample>& samples,
                     std::vector<WettingSample>& wetting,
                     bool* wetting_flux_zero) const override;
  BoundaryTrace build_boundary_trace(const AnisotropyGauge& gauge,
                                     int resolution) const override;
  SurfaceMesh surface_mesh(int resolution) const override;

 private:
  Fn f_, fu_, fv_, fuu_, fuv_, fvv_;
  double radius_;
  bool normal_positive_last_;
};

/// Per-sample anisotropic curvature data for a quadratured surface.
struct ShapeSample {
  Vector nu_F;
  double F_nu = 0.0;
  Matrix shape_operator;         // A_F(nu) dnu in the sample frame
  Vector curvatures;             // sorted ascending
  double mean_curvature = 0.0;   // trace of the shape operator
  Matrix principal_directions;   // d x n ambient directions
};

struct AnisotropicShapeData {
  std::vector<ShapeSample> samples;
  double min_mean_curvature = 0.0;
  double max_mean_curvature = 0.0;
  int argmin_mean_curvature = -1;
};

// Operations ----------------------------------------------------------------

/// Quadrature sampling of a patch. resolution >= 4.
QuadraturedSurface sample(std::shared_ptr<const ParametrizedPatch> patch, int resolution);

/// Classical forms and Weingarten map at a parameter point.
FundamentalForms fundamental_forms(const ParametrizedPatch& patch, int chart,
                                   const Vector& u);

/// Anisotropic normal, shape operator, principal curvatures and directions at
/// every sample. The product A_F dnu is symmetrized through the positive
/// square root of A_F, so the spectrum is real by construction.
AnisotropicShapeData anisotropic_shape(const AnisotropyGauge& gauge,
                                       const QuadraturedSurface& surface);

/// Boundary sampling at 4x the interior linear resolution.
BoundaryTrace boundary_trace(const ParametrizedPatch& patch, const AnisotropyGauge& gauge,
                             int resolution);

/// Deterministic weighted sum of a per-sample integrand.
double integrate(const QuadraturedSurface& surface,
                 const std::function<double(const SurfaceSample&)>& integrand);

/// Enclosed volume via the divergence theorem; the wetted-face term is
/// dropped when the face lies on planes or cones through the origin, where
/// the position flux vanishes pointwise. Throws NotClosed if the flux-closure
/// residual exceeds 1e-3.
double enclosed_volume(const QuadraturedSurface& surface);

/// Same, additionally checking that the wetted face lies on the container
/// boundary.
double enclosed_volume(const QuadraturedSurface& surface, const ConvexContainer& container);

SurfaceJet jet_from_ambient_map(const AmbientMap& map, const Vector& z, const Vector& z_t,
                                const Vector& z_p, const Vector& z_tt, const Vector& z_tp,
                                const Vector& z_pp);

}  // namespace wulffkit
