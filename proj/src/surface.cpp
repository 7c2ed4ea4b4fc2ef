#include "wulffkit/surface.hpp"

#include <algorithm>
#include <cmath>

#include "wulffkit/mesh.hpp"
#include "wulffkit/quadrature.hpp"

namespace wulffkit {

namespace {

constexpr double kJacobianStep = 1e-5;  // ambient step for second derivatives

double smoothstep5(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

Eigen::Vector3d to3(const Vector& v) { return Eigen::Vector3d(v[0], v[1], v[2]); }

Vector cross3(const Vector& a, const Vector& b) {
  Eigen::Vector3d c = to3(a).cross(to3(b));
  Vector out(3);
  out << c.x(), c.y(), c.z();
  return out;
}

Vector raw_normal_from_tangents(const Matrix& tangents) {
  if (tangents.rows() == 3) return cross3(tangents.col(0), tangents.col(1));
  Vector t = tangents.col(0);
  Vector n(2);
  n << t[1], -t[0];
  return n;
}

struct SampleGeometry {
  Vector x;
  Vector normal;
  Matrix frame;
  Matrix metric;
  Matrix second;
  Matrix dnu_frame;
  double det_metric = 0.0;
};

SampleGeometry sample_geometry(const ParametrizedPatch& patch, const SurfaceJet& jet) {
  SampleGeometry g;
  const int n = patch.tangent_dimension();
  g.x = jet.x;
  const Matrix& J = jet.tangents;
  g.metric = J.transpose() * J;
  g.det_metric = g.metric.determinant();
  if (!(g.det_metric >= 1e-10))
    fail(ErrorCode::DegenerateImmersion, "first fundamental form is degenerate");

  Vector raw = raw_normal_from_tangents(J);
  raw.normalize();
  const double sign = patch.orientation_sign(jet.x, raw);
  g.normal = sign * raw;

  // Second form with the sign convention dnu = I^{-1} II (identity on the
  // outward-oriented unit sphere).
  g.second.resize(n, n);
  if (n == 1) {
    g.second(0, 0) = -jet.second[0].dot(g.normal);
  } else {
    g.second(0, 0) = -jet.second[0].dot(g.normal);
    g.second(0, 1) = g.second(1, 0) = -jet.second[1].dot(g.normal);
    g.second(1, 1) = -jet.second[2].dot(g.normal);
  }

  // Orthonormal tangent frame by Gram-Schmidt on the parameter directions.
  g.frame.resize(J.rows(), n);
  Vector e1 = J.col(0).normalized();
  g.frame.col(0) = e1;
  if (n == 2) {
    Vector e2 = J.col(1) - J.col(1).dot(e1) * e1;
    g.frame.col(1) = e2.normalized();
  }
  const Matrix b = J.transpose() * g.frame;
  const Matrix metric_inv = g.metric.inverse();
  Matrix s = b.transpose() * metric_inv * g.second * metric_inv * b;
  g.dnu_frame = 0.5 * (s + s.transpose());
  return g;
}

SurfaceSample make_sample(const ParametrizedPatch& patch, int chart, const Vector& u,
                          double rule_weight, double pou) {
  const SurfaceJet jet = patch.jet(chart, u);
  SampleGeometry g = sample_geometry(patch, jet);
  SurfaceSample s;
  s.x = std::move(g.x);
  s.normal = std::move(g.normal);
  s.frame = std::move(g.frame);
  s.dnu = std::move(g.dnu_frame);
  s.det_metric = g.det_metric;
  s.weight = rule_weight * std::sqrt(g.det_metric) * pou;
  s.chart = chart;
  s.u = u;
  return s;
}

Vector param2(double a, double b) {
  Vector u(2);
  u << a, b;
  return u;
}

Vector param1(double a) {
  Vector u(1);
  u << a;
  return u;
}

BoundarySample finish_boundary_sample(const AnisotropyGauge& gauge, const Vector& x,
                                      const Vector& mu, const Vector& normal,
                                      double weight) {
  BoundarySample s;
  s.x = x;
  s.mu = mu;
  s.normal = normal;
  s.nu_F = gauge.cahn_hoffman(normal);
  s.F_nu = gauge(normal);
  s.mu_F = s.F_nu * mu - s.nu_F.dot(mu) * normal;
  s.weight = weight;
  return s;
}

}  // namespace

// QuadraturedSurface ---------------------------------------------------------

int QuadraturedSurface::dimension() const {
  return patch ? patch->ambient_dimension() : 3;
}

double QuadraturedSurface::area() const {
  std::vector<double> w(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) w[i] = samples[i].weight;
  return pairwise_sum(w);
}

Vector QuadraturedSurface::normal_flux() const {
  std::vector<Vector> terms(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    terms[i] = samples[i].weight * samples[i].normal;
  return pairwise_sum(terms, dimension());
}

double QuadraturedSurface::flux_closure_residual() const {
  Vector flux = normal_flux();
  std::vector<Vector> terms(wetting.size());
  for (std::size_t i = 0; i < wetting.size(); ++i)
    terms[i] = wetting[i].weight * wetting[i].normal;
  if (!terms.empty()) flux += pairwise_sum(terms, dimension());
  return flux.norm() / area();
}

const RegionTester& QuadraturedSurface::region_tester() const {
  static std::mutex build_mutex;
  const std::lock_guard<std::mutex> lock(build_mutex);
  if (!tester_) {
    const int mesh_res = std::clamp(resolution, 32, 96);
    tester_ = std::make_shared<RegionTester>(patch->region_mesh(mesh_res));
  }
  return *tester_;
}

// Ambient maps ---------------------------------------------------------------

WulffMap::WulffMap(std::shared_ptr<const AnisotropyGauge> gauge, Vector center,
                   double radius)
    : gauge_(std::move(gauge)), center_(std::move(center)), radius_(radius) {
  if (radius_ <= 0.0) fail(ErrorCode::InvalidArgument, "Wulff radius must be positive");
}

Vector WulffMap::value(const Vector& z) const {
  return center_ + radius_ * gauge_->gradient(z);
}

Matrix WulffMap::jacobian(const Vector& z) const { return radius_ * gauge_->hessian(z); }

RadialMap::RadialMap(Vector center, double base_radius, std::vector<PerturbationTerm> terms)
    : center_(std::move(center)), base_radius_(base_radius), terms_(std::move(terms)) {
  if (base_radius_ <= 0.0) fail(ErrorCode::InvalidArgument, "base radius must be positive");
  for (auto& term : terms_) {
    if (term.axis.size() != center_.size())
      fail(ErrorCode::InvalidArgument, "radial term axis dimension mismatch");
    term.axis.normalize();
  }
}

double RadialMap::profile(const Vector& z, Vector* gradient) const {
  double rho = base_radius_;
  if (gradient) gradient->setZero(center_.size());
  for (const auto& term : terms_) {
    const double t = z.dot(term.axis);
    double p0 = 1.0, p1 = t, d0 = 0.0, d1 = 1.0;
    for (int k = 1; k < term.degree; ++k) {
      const double a = (2.0 * k + 1.0) / (k + 1.0);
      const double b = static_cast<double>(k) / (k + 1.0);
      const double p2 = a * t * p1 - b * p0;
      const double d2 = a * (p1 + t * d1) - b * d0;
      p0 = p1; p1 = p2;
      d0 = d1; d1 = d2;
    }
    const double p = term.degree == 0 ? 1.0 : p1;
    const double dp = term.degree == 0 ? 0.0 : d1;
    rho += term.amplitude * p;
    if (gradient) *gradient += term.amplitude * dp * (term.axis - t * z);
  }
  return rho;
}

Vector RadialMap::value(const Vector& z) const {
  const Vector s = z.normalized();
  return center_ + profile(s, nullptr) * s;
}

Matrix RadialMap::jacobian(const Vector& z) const {
  const double r = z.norm();
  const Vector s = z / r;
  Vector grad;
  const double rho = profile(s, &grad);
  const int d = static_cast<int>(center_.size());
  const Matrix proj = Matrix::Identity(d, d) - s * s.transpose();
  return (s * grad.transpose() + rho * proj) / r;
}

// Cutter ---------------------------------------------------------------------

Cutter Cutter::make_half_space(const Vector& normal, double offset) {
  Cutter c;
  c.kind = Kind::HalfSpace;
  const double n = normal.norm();
  if (n < 1e-14) fail(ErrorCode::ZeroVector, "cutter normal must be nonzero");
  c.half_space = {normal / n, offset / n};
  return c;
}

Cutter Cutter::make_cone(const Vector& vertex, const Vector& axis, double half_angle) {
  if (!(half_angle > 0.0 && half_angle < kPi / 2))
    fail(ErrorCode::InvalidArgument, "cone cutter half-angle must lie in (0, pi/2)");
  Cutter c;
  c.kind = Kind::Cone;
  c.vertex = vertex;
  c.axis = axis.normalized();
  c.half_angle = half_angle;
  return c;
}

Cutter Cutter::from_container(const ConvexContainer& container) {
  switch (container.kind()) {
    case ConvexContainer::Kind::HalfSpace:
      return make_half_space(container.facets()[0].normal, container.facets()[0].offset);
    case ConvexContainer::Kind::CircularCone:
      return make_cone(container.cone_vertex(), container.cone_axis(),
                       container.cone_half_angle());
    default:
      fail(ErrorCode::InvalidArgument,
           "only half-space and circular-cone containers convert to cutters");
  }
}

double Cutter::value(const Vector& x) const {
  if (kind == Kind::HalfSpace) return half_space.normal.dot(x) - half_space.offset;
  const Vector w = x - vertex;
  return std::cos(half_angle) * w.norm() - w.dot(axis);
}

Vector Cutter::gradient(const Vector& x) const {
  if (kind == Kind::HalfSpace) return half_space.normal;
  const Vector w = x - vertex;
  return std::cos(half_angle) * w.normalized() - axis;
}

bool Cutter::through_origin() const {
  if (kind == Kind::HalfSpace) return std::abs(half_space.offset) < 1e-12;
  return vertex.norm() < 1e-12;
}

// Jets through ambient maps --------------------------------------------------

SurfaceJet jet_from_ambient_map(const AmbientMap& map, const Vector& z, const Vector& z_t,
                                const Vector& z_p, const Vector& z_tt, const Vector& z_tp,
                                const Vector& z_pp) {
  const int d = map.dimension();
  const Matrix jac = map.jacobian(z);
  SurfaceJet jet;
  jet.x = map.value(z);
  const bool curve = d == 2;
  jet.tangents.resize(d, curve ? 1 : 2);
  jet.tangents.col(0) = jac * z_t;
  if (!curve) jet.tangents.col(1) = jac * z_p;

  // Directional derivative of the Jacobian by central differences along the
  // normalized direction; exact chain rule otherwise.
  const auto djac = [&](const Vector& dir) -> Matrix {
    const double n = dir.norm();
    if (n < 1e-12) return Matrix::Zero(d, d);
    const Vector e = dir / n;
    return n * (map.jacobian(z + kJacobianStep * e) - map.jacobian(z - kJacobianStep * e)) /
           (2.0 * kJacobianStep);
  };
  const Matrix dj_t = djac(z_t);
  jet.second.push_back(dj_t * z_t + jac * z_tt);
  if (!curve) {
    jet.second.push_back(dj_t * z_p + jac * z_tp);
    const Matrix dj_p = djac(z_p);
    jet.second.push_back(dj_p * z_p + jac * z_pp);
  }
  return jet;
}

// ParametrizedPatch defaults --------------------------------------------------

BoundaryTrace ParametrizedPatch::build_boundary_trace(const AnisotropyGauge&, int) const {
  fail(ErrorCode::ClosedSurface, "patch has no boundary");
}

SurfaceMesh ParametrizedPatch::region_mesh(int resolution) const {
  if (!closed())
    fail(ErrorCode::NotClosed, "patch cannot provide a watertight region mesh");
  return surface_mesh(resolution);
}

// SphereMappedPatch -----------------------------------------------------------

std::shared_ptr<SphereMappedPatch> SphereMappedPatch::closed_surface(
    std::shared_ptr<const AmbientMap> map) {
  if (map->dimension() != 3)
    fail(ErrorCode::InvalidArgument, "sphere-mapped patches are three-dimensional");
  auto patch = std::shared_ptr<SphereMappedPatch>(new SphereMappedPatch());
  patch->map_ = std::move(map);
  patch->is_cap_ = false;
  return patch;
}

std::shared_ptr<SphereMappedPatch> SphereMappedPatch::cap(
    std::shared_ptr<const AmbientMap> map, const Cutter& cutter) {
  if (map->dimension() != 3)
    fail(ErrorCode::InvalidArgument, "sphere-mapped patches are three-dimensional");
  auto patch = std::shared_ptr<SphereMappedPatch>(new SphereMappedPatch());
  patch->map_ = std::move(map);
  patch->is_cap_ = true;
  patch->cutter_ = cutter;

  // Deepest-inside direction anchors the cap chart.
  double gmin = std::numeric_limits<double>::infinity();
  double gmax = -std::numeric_limits<double>::infinity();
  Vector axis;
  for (const Vector& z : quasi_uniform_directions(3, 48 * 48)) {
    const double g = cutter.value(patch->map_->value(z));
    if (g < gmin) {
      gmin = g;
      axis = z;
    }
    gmax = std::max(gmax, g);
  }
  if (gmin >= 0.0) fail(ErrorCode::EmptyCap, "cutter removes the whole surface");
  if (gmax <= 0.0) fail(ErrorCode::NoTrim, "cutter keeps the whole surface");
  const TangentFrame frame = TangentFrame::at(axis);
  patch->cap_frame_.resize(3, 3);
  patch->cap_frame_.col(0) = frame.basis.col(0);
  patch->cap_frame_.col(1) = frame.basis.col(1);
  patch->cap_frame_.col(2) = axis;

  // Tabulate the trim curve once by continuation around the cap; later
  // queries bisect inside a bracket read off the table.
  const int table_size = 512;
  patch->trim_table_.reserve(table_size);
  double previous = patch->locate_trim(0.0, 0.0, kPi);
  for (int i = 0; i < table_size; ++i) {
    const double phi = 2.0 * kPi * i / table_size;
    previous = patch->locate_trim(phi, previous - 0.1, previous + 0.1);
    patch->trim_table_.push_back(previous);
  }
  return patch;
}

Vector SphereMappedPatch::direction(int chart, double theta, double phi) const {
  Vector z, zt, zp, ztt, ztp, zpp;
  chart_direction_jet(chart, theta, phi, z, zt, zp, ztt, ztp, zpp);
  return z;
}

void SphereMappedPatch::chart_direction_jet(int chart, double theta, double phi, Vector& z,
                                            Vector& z_t, Vector& z_p, Vector& z_tt,
                                            Vector& z_tp, Vector& z_pp) const {
  Matrix frame(3, 3);
  if (is_cap_) {
    frame = cap_frame_;
  } else if (chart == 0) {
    frame = Matrix::Identity(3, 3);
  } else {
    frame = Matrix::Identity(3, 3);
    frame(1, 1) = -1.0;
    frame(2, 2) = -1.0;
  }
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  Vector c(3), c_t(3), c_p(3), c_tp(3), c_pp(3);
  c << st * cp, st * sp, ct;
  c_t << ct * cp, ct * sp, -st;
  c_p << -st * sp, st * cp, 0.0;
  c_tp << -ct * sp, ct * cp, 0.0;
  c_pp << -st * cp, -st * sp, 0.0;
  z = frame * c;
  z_t = frame * c_t;
  z_p = frame * c_p;
  z_tt = -z;
  z_tp = frame * c_tp;
  z_pp = frame * c_pp;
}

SurfaceJet SphereMappedPatch::jet(int chart, const Vector& u) const {
  Vector z, zt, zp, ztt, ztp, zpp;
  chart_direction_jet(chart, u[0], u[1], z, zt, zp, ztt, ztp, zpp);
  return jet_from_ambient_map(*map_, z, zt, zp, ztt, ztp, zpp);
}

double SphereMappedPatch::orientation_sign(const Vector& x, const Vector& raw_normal) const {
  const double s = raw_normal.dot(x - map_->center()) >= 0.0 ? 1.0 : -1.0;
  return orientation_flip_ ? -s : s;
}

double SphereMappedPatch::locate_trim(double phi, double bracket_lo,
                                      double bracket_hi) const {
  const auto g = [&](double theta) {
    return cutter_->value(map_->value(direction(0, theta, phi)));
  };
  double lo = std::max(0.0, bracket_lo);
  double hi = std::min(kPi, bracket_hi);
  if (!(g(lo) < 0.0 && g(hi) > 0.0)) {
    // Fall back to a full meridian march from the axis.
    if (g(0.0) >= 0.0)
      fail(ErrorCode::PreconditionFailure, "cap axis is not inside the kept region");
    const double step = kPi / 256.0;
    bool bracketed = false;
    for (double t = step; t <= kPi + 1e-12; t += step) {
      if (g(t) > 0.0) {
        lo = t - step;
        hi = t;
        bracketed = true;
        break;
      }
    }
    if (!bracketed)
      fail(ErrorCode::PreconditionFailure, "cap trim is not star-shaped around its axis");
  }
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  const double theta = 0.5 * (lo + hi);
  const double slope = (g(theta + 1e-6) - g(theta - 1e-6)) / 2e-6;
  if (std::abs(slope) < 1e-8)
    fail(ErrorCode::NonTransversalCut, "cutter meets the surface tangentially");
  return theta;
}

double SphereMappedPatch::theta_max(double phi) const {
  if (!is_cap_) fail(ErrorCode::InvalidArgument, "theta_max is only defined for caps");
  if (trim_table_.empty()) return locate_trim(phi, 0.0, kPi);
  // Bracket from the tabulated trim curve, widening on a miss.
  const int n = static_cast<int>(trim_table_.size());
  phi = phi - 2.0 * kPi * std::floor(phi / (2.0 * kPi));
  const double slot = phi * n / (2.0 * kPi);
  const int i0 = std::min(n - 1, static_cast<int>(slot));
  const int i1 = (i0 + 1) % n;
  const double f = slot - i0;
  const double center = (1.0 - f) * trim_table_[i0] + f * trim_table_[i1];
  double halfwidth = std::abs(trim_table_[i1] - trim_table_[i0]) +
                     std::abs(trim_table_[i0] - trim_table_[(i0 + n - 1) % n]) + 1e-3;
  for (int widen = 0; widen < 4; ++widen) {
    const auto g = [&](double theta) {
      return cutter_->value(map_->value(direction(0, theta, phi)));
    };
    const double lo = std::max(0.0, center - halfwidth);
    const double hi = std::min(kPi, center + halfwidth);
    if (g(lo) < 0.0 && g(hi) > 0.0) return locate_trim(phi, lo, hi);
    halfwidth *= 4.0;
  }
  return locate_trim(phi, 0.0, kPi);
}

void SphereMappedPatch::build_samples(int resolution, std::vector<SurfaceSample>& samples,
                                      std::vector<WettingSample>& wetting,
                                      bool* wetting_flux_zero) const {
  samples.clear();
  wetting.clear();
  *wetting_flux_zero = false;
  const int nphi = 2 * resolution;
  const QuadratureRule phi_rule = periodic_rule(nphi, 2.0 * kPi);

  if (!is_cap_) {
    const double w = pou_halfwidth_;
    const double t1 = kPi / 2 - w, t2 = kPi / 2 + w;
    const int n1 = std::max(4, static_cast<int>(std::lround(resolution * t1 / t2)));
    const int n2 = std::max(4, resolution - n1);
    QuadratureRule theta_rule = gauss_legendre(n1, 0.0, t1);
    const QuadratureRule band = gauss_legendre(n2, t1, t2);
    theta_rule.nodes.insert(theta_rule.nodes.end(), band.nodes.begin(), band.nodes.end());
    theta_rule.weights.insert(theta_rule.weights.end(), band.weights.begin(),
                              band.weights.end());
    for (int chart = 0; chart < 2; ++chart) {
      for (int j = 0; j < nphi; ++j) {
        for (std::size_t i = 0; i < theta_rule.nodes.size(); ++i) {
          const double theta = theta_rule.nodes[i];
          const double chi =
              theta <= t1 ? 1.0 : 1.0 - smoothstep5((theta - t1) / (2.0 * w));
          samples.push_back(make_sample(*this, chart, param2(theta, phi_rule.nodes[j]),
                                        theta_rule.weights[i] * phi_rule.weights[j], chi));
        }
      }
    }
    return;
  }

  // Cap: per-meridian Gauss-Legendre up to the trim curve.
  for (int j = 0; j < nphi; ++j) {
    const double phi = phi_rule.nodes[j];
    const double tmax = theta_max(phi);
    const QuadratureRule theta_rule = gauss_legendre(resolution, 0.0, tmax);
    for (std::size_t i = 0; i < theta_rule.nodes.size(); ++i) {
      samples.push_back(make_sample(*this, 0, param2(theta_rule.nodes[i], phi),
                                    theta_rule.weights[i] * phi_rule.weights[j], 1.0));
    }
  }

  // Wetted container face closing the region: ruled quadrature from the face
  // apex (half-space: boundary centroid; cone: cone vertex) to the trim curve.
  const QuadratureRule t_rule = gauss_legendre(resolution, 0.0, 1.0);
  std::vector<Vector> curve(nphi), tangent(nphi);
  for (int j = 0; j < nphi; ++j) {
    const double phi = phi_rule.nodes[j];
    const double tmax = theta_max(phi);
    const SurfaceJet bj = jet(0, param2(tmax, phi));
    const Vector grad = cutter_->gradient(bj.x);
    const double g_t = grad.dot(bj.tangents.col(0));
    const double g_p = grad.dot(bj.tangents.col(1));
    curve[j] = bj.x;
    tangent[j] = bj.tangents.col(1) - (g_p / g_t) * bj.tangents.col(0);
  }
  Vector apex;
  if (cutter_->kind == Cutter::Kind::HalfSpace) {
    apex = Vector::Zero(3);
    for (const auto& c : curve) apex += c;
    apex /= nphi;
  } else {
    apex = cutter_->vertex;
  }
  for (int j = 0; j < nphi; ++j) {
    Vector face_normal;
    if (cutter_->kind == Cutter::Kind::HalfSpace) {
      face_normal = cutter_->half_space.normal;
    } else {
      const Vector w = (curve[j] - cutter_->vertex).normalized();
      face_normal =
          (std::cos(cutter_->half_angle) * w - cutter_->axis) / std::sin(cutter_->half_angle);
    }
    const double jac = cross3(curve[j] - apex, tangent[j]).norm();
    for (std::size_t i = 0; i < t_rule.nodes.size(); ++i) {
      const double t = t_rule.nodes[i];
      WettingSample ws;
      ws.x = apex + t * (curve[j] - apex);
      ws.normal = face_normal;
      ws.weight = t_rule.weights[i] * phi_rule.weights[j] * t * jac;
      wetting.push_back(ws);
    }
  }
  *wetting_flux_zero = cutter_->through_origin();
}

BoundaryTrace SphereMappedPatch::build_boundary_trace(const AnisotropyGauge& gauge,
                                                      int resolution) const {
  if (!is_cap_) fail(ErrorCode::ClosedSurface, "closed surface has no boundary");
  BoundaryTrace trace;
  trace.dimension = 3;
  const int nb = 8 * resolution;  // 4x the interior linear resolution in phi
  const QuadratureRule rule = periodic_rule(nb, 2.0 * kPi);
  for (int j = 0; j < nb; ++j) {
    const double phi = rule.nodes[j];
    const double tmax = theta_max(phi);
    const SurfaceJet bj = jet(0, param2(tmax, phi));
    const SampleGeometry geom = sample_geometry(*this, bj);
    const Vector grad = cutter_->gradient(bj.x);
    const double g_t = grad.dot(bj.tangents.col(0));
    const double g_p = grad.dot(bj.tangents.col(1));
    const Vector curve_tangent = bj.tangents.col(1) - (g_p / g_t) * bj.tangents.col(0);
    const Vector that = curve_tangent.normalized();
    Vector mu = bj.tangents.col(0) - bj.tangents.col(0).dot(that) * that;
    mu.normalize();  // outward: toward growing theta
    trace.samples.push_back(finish_boundary_sample(gauge, bj.x, mu, geom.normal,
                                                   curve_tangent.norm() * rule.weights[j]));
  }
  return trace;
}

SurfaceMesh SphereMappedPatch::surface_mesh(int resolution) const {
  SurfaceMesh mesh;
  mesh.dimension = 3;
  const int rows = std::max(8, resolution);
  const int cols = std::max(16, resolution);

  std::vector<Vector> verts;
  std::vector<std::array<int, 3>> tris;
  const auto point = [&](double theta, double phi) {
    if (is_cap_) return map_->value(direction(0, theta, phi));
    // Global spherical coordinates give a single watertight grid.
    Vector z(3);
    z << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
    return map_->value(z);
  };

  const double theta_top = is_cap_ ? 0.0 : 0.0;
  verts.push_back(point(theta_top, 0.0));  // pole
  std::vector<int> last_row;
  const int inner_rows = is_cap_ ? rows : rows - 1;
  for (int i = 1; i <= inner_rows; ++i) {
    std::vector<int> row(cols);
    for (int j = 0; j < cols; ++j) {
      const double phi = 2.0 * kPi * j / cols;
      const double theta =
          is_cap_ ? theta_max(phi) * i / rows : kPi * i / rows;
      row[j] = static_cast<int>(verts.size());
      verts.push_back(point(theta, phi));
    }
    if (i == 1) {
      for (int j = 0; j < cols; ++j) tris.push_back({0, row[j], row[(j + 1) % cols]});
    } else {
      for (int j = 0; j < cols; ++j) {
        const int a = last_row[j], b = last_row[(j + 1) % cols];
        const int c = row[j], d = row[(j + 1) % cols];
        tris.push_back({a, c, d});
        tris.push_back({a, d, b});
      }
    }
    last_row = row;
  }
  if (!is_cap_) {
    const int south = static_cast<int>(verts.size());
    verts.push_back(point(kPi, 0.0));
    for (int j = 0; j < cols; ++j)
      tris.push_back({last_row[j], south, last_row[(j + 1) % cols]});
  } else {
    mesh.boundary_loops.push_back(last_row);
  }

  mesh.vertices.resize(static_cast<int>(verts.size()), 3);
  for (std::size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(i) = verts[i].transpose();
  mesh.triangles.resize(static_cast<int>(tris.size()), 3);
  for (std::size_t i = 0; i < tris.size(); ++i)
    mesh.triangles.row(i) << tris[i][0], tris[i][1], tris[i][2];
  return mesh;
}

SurfaceMesh SphereMappedPatch::region_mesh(int resolution) const {
  SurfaceMesh mesh = surface_mesh(resolution);
  if (!is_cap_) return mesh;
  const std::vector<int>& loop = mesh.boundary_loops[0];
  Vector apex;
  if (cutter_->kind == Cutter::Kind::HalfSpace) {
    apex = Vector::Zero(3);
    for (const int idx : loop) apex += mesh.vertices.row(idx).transpose();
    apex /= static_cast<double>(loop.size());
  } else {
    apex = cutter_->vertex;
  }
  const int apex_idx = static_cast<int>(mesh.vertices.rows());
  mesh.vertices.conservativeResize(apex_idx + 1, 3);
  mesh.vertices.row(apex_idx) = apex.transpose();
  const int old_tris = static_cast<int>(mesh.triangles.rows());
  const int n = static_cast<int>(loop.size());
  mesh.triangles.conservativeResize(old_tris + n, 3);
  for (int j = 0; j < n; ++j)
    mesh.triangles.row(old_tris + j) << apex_idx, loop[j], loop[(j + 1) % n];
  return mesh;
}

// CurvePatch ------------------------------------------------------------------

std::shared_ptr<CurvePatch> CurvePatch::closed_curve(std::shared_ptr<const AmbientMap> map) {
  if (map->dimension() != 2)
    fail(ErrorCode::InvalidArgument, "curve patches are two-dimensional");
  auto patch = std::shared_ptr<CurvePatch>(new CurvePatch());
  patch->map_ = std::move(map);
  return patch;
}

std::shared_ptr<CurvePatch> CurvePatch::arc(std::shared_ptr<const AmbientMap> map,
                                            const Cutter& cutter) {
  if (map->dimension() != 2)
    fail(ErrorCode::InvalidArgument, "curve patches are two-dimensional");
  auto patch = std::shared_ptr<CurvePatch>(new CurvePatch());
  patch->map_ = std::move(map);
  patch->is_arc_ = true;
  patch->cutter_ = cutter;

  double gmin = std::numeric_limits<double>::infinity();
  double gmax = -std::numeric_limits<double>::infinity();
  double best_angle = 0.0;
  const int scan = 2048;
  for (int i = 0; i < scan; ++i) {
    const double a = 2.0 * kPi * i / scan;
    Vector z(2);
    z << std::cos(a), std::sin(a);
    const double g = cutter.value(patch->map_->value(z));
    if (g < gmin) {
      gmin = g;
      best_angle = a;
    }
    gmax = std::max(gmax, g);
  }
  if (gmin >= 0.0) fail(ErrorCode::EmptyCap, "cutter removes the whole curve");
  if (gmax <= 0.0) fail(ErrorCode::NoTrim, "cutter keeps the whole curve");

  const auto g_at = [&](double offset) {
    Vector z(2);
    z << std::cos(best_angle + offset), std::sin(best_angle + offset);
    return cutter.value(patch->map_->value(z));
  };
  const auto bisect = [&](double direction) {
    const double step = direction * kPi / 256.0;
    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    for (int i = 1; i <= 256; ++i) {
      if (g_at(i * step) > 0.0) {
        lo = (i - 1) * step;
        hi = i * step;
        bracketed = true;
        break;
      }
    }
    if (!bracketed)
      fail(ErrorCode::PreconditionFailure, "arc trim is not star-shaped around its axis");
    for (int iter = 0; iter < 80; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (g_at(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  patch->theta_hi_ = best_angle + bisect(+1.0);
  patch->theta_lo_ = best_angle + bisect(-1.0);
  return patch;
}

Vector CurvePatch::direction(double theta) const {
  Vector z(2);
  z << std::cos(theta), std::sin(theta);
  return z;
}

SurfaceJet CurvePatch::jet(int, const Vector& u) const {
  const double theta = u[0];
  Vector z(2), z_t(2);
  z << std::cos(theta), std::sin(theta);
  z_t << -std::sin(theta), std::cos(theta);
  const Matrix jac = map_->jacobian(z);
  SurfaceJet jet;
  jet.x = map_->value(z);
  jet.tangents.resize(2, 1);
  jet.tangents.col(0) = jac * z_t;
  const Matrix dj = (map_->jacobian(z + kJacobianStep * z_t) -
                     map_->jacobian(z - kJacobianStep * z_t)) /
                    (2.0 * kJacobianStep);
  jet.second.push_back(dj * z_t - jac * z);  // z_tt = -z
  return jet;
}

double CurvePatch::orientation_sign(const Vector& x, const Vector& raw_normal) const {
  return raw_normal.dot(x - map_->center()) >= 0.0 ? 1.0 : -1.0;
}

void CurvePatch::build_samples(int resolution, std::vector<SurfaceSample>& samples,
                               std::vector<WettingSample>& wetting,
                               bool* wetting_flux_zero) const {
  samples.clear();
  wetting.clear();
  *wetting_flux_zero = false;
  if (!is_arc_) {
    const QuadratureRule rule = periodic_rule(std::max(64, 4 * resolution), 2.0 * kPi);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      samples.push_back(make_sample(*this, 0, param1(rule.nodes[i]), rule.weights[i], 1.0));
    return;
  }
  const QuadratureRule rule =
      gauss_legendre(std::max(16, 2 * resolution), theta_lo_, theta_hi_);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    samples.push_back(make_sample(*this, 0, param1(rule.nodes[i]), rule.weights[i], 1.0));

  // Closure segments along the container wall.
  const Vector e0 = map_->value(direction(theta_lo_));
  const Vector e1 = map_->value(direction(theta_hi_));
  const QuadratureRule seg = gauss_legendre(std::max(8, resolution), 0.0, 1.0);
  const auto add_segment = [&](const Vector& a, const Vector& b, const Vector& normal) {
    const double len = (b - a).norm();
    for (std::size_t i = 0; i < seg.nodes.size(); ++i) {
      WettingSample ws;
      ws.x = a + seg.nodes[i] * (b - a);
      ws.normal = normal;
      ws.weight = seg.weights[i] * len;
      wetting.push_back(ws);
    }
  };
  if (cutter_->kind == Cutter::Kind::HalfSpace) {
    add_segment(e1, e0, cutter_->half_space.normal);
  } else {
    for (const Vector* e : {&e0, &e1}) {
      const Vector u = (*e - cutter_->vertex).normalized();
      Vector n(2);
      n << -u[1], u[0];
      if (n.dot(cutter_->axis) > 0.0) n = -n;  // outward from the sector
      add_segment(cutter_->vertex, *e, n);
    }
  }
  *wetting_flux_zero = cutter_->through_origin();
}

BoundaryTrace CurvePatch::build_boundary_trace(const AnisotropyGauge& gauge, int) const {
  if (!is_arc_) fail(ErrorCode::ClosedSurface, "closed curve has no boundary");
  BoundaryTrace trace;
  trace.dimension = 2;
  for (const double theta : {theta_lo_, theta_hi_}) {
    const SurfaceJet bj = jet(0, param1(theta));
    const SampleGeometry geom = sample_geometry(*this, bj);
    Vector mu = bj.tangents.col(0).normalized();
    if (theta == theta_lo_) mu = -mu;  // outward from the arc
    trace.samples.push_back(finish_boundary_sample(gauge, bj.x, mu, geom.normal, 1.0));
  }
  return trace;
}

SurfaceMesh CurvePatch::surface_mesh(int resolution) const {
  SurfaceMesh mesh;
  mesh.dimension = 2;
  const int n = std::max(64, 4 * resolution);
  if (!is_arc_) {
    mesh.vertices.resize(n, 2);
    mesh.polyline.resize(n);
    for (int i = 0; i < n; ++i) {
      mesh.vertices.row(i) =
          map_->value(direction(2.0 * kPi * i / n)).transpose();
      mesh.polyline[i] = i;
    }
    mesh.polyline_closed = true;
    return mesh;
  }
  mesh.vertices.resize(n + 1, 2);
  mesh.polyline.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double theta = theta_lo_ + (theta_hi_ - theta_lo_) * i / n;
    mesh.vertices.row(i) = map_->value(direction(theta)).transpose();
    mesh.polyline[i] = i;
  }
  mesh.boundary_loops.push_back({0});
  mesh.boundary_loops.push_back({n});
  return mesh;
}

SurfaceMesh CurvePatch::region_mesh(int resolution) const {
  SurfaceMesh mesh = surface_mesh(resolution);
  if (!is_arc_) return mesh;
  if (cutter_->kind == Cutter::Kind::Cone) {
    const int idx = static_cast<int>(mesh.vertices.rows());
    mesh.vertices.conservativeResize(idx + 1, 2);
    mesh.vertices.row(idx) = cutter_->vertex.transpose();
    mesh.polyline.push_back(idx);
  }
  mesh.polyline_closed = true;  // half-space closure is the straight chord
  return mesh;
}

// RectanglePatch ----------------------------------------------------------------

RectanglePatch::RectanglePatch(JetFn jet, double u0, double u1, double v0, double v1,
                               bool normal_positive_last)
    : jet_(std::move(jet)),
      u0_(u0),
      u1_(u1),
      v0_(v0),
      v1_(v1),
      normal_positive_last_(normal_positive_last) {}

SurfaceJet RectanglePatch::jet(int, const Vector& u) const { return jet_(u[0], u[1]); }

double RectanglePatch::orientation_sign(const Vector&, const Vector& raw_normal) const {
  const double last = raw_normal[raw_normal.size() - 1];
  if (std::abs(last) < 1e-12) return 1.0;
  return (last > 0.0) == normal_positive_last_ ? 1.0 : -1.0;
}

void RectanglePatch::build_samples(int resolution, std::vector<SurfaceSample>& samples,
                                   std::vector<WettingSample>& wetting,
                                   bool* wetting_flux_zero) const {
  samples.clear();
  wetting.clear();
  *wetting_flux_zero = false;
  const QuadratureRule ur = gauss_legendre(resolution, u0_, u1_);
  const QuadratureRule vr = gauss_legendre(resolution, v0_, v1_);
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j)
      samples.push_back(make_sample(*this, 0, param2(ur.nodes[i], vr.nodes[j]),
                                    ur.weights[i] * vr.weights[j], 1.0));
}

BoundaryTrace RectanglePatch::build_boundary_trace(const AnisotropyGauge& gauge,
                                                   int resolution) const {
  BoundaryTrace trace;
  trace.dimension = 3;
  const int n = 4 * resolution;
  struct Edge {
    bool along_u;
    double fixed;
    double lo, hi;
    double outward;  // sign of the outward parameter direction
  };
  const std::vector<Edge> edges = {{true, v0_, u0_, u1_, -1.0},
                                   {true, v1_, u0_, u1_, +1.0},
                                   {false, u0_, v0_, v1_, -1.0},
                                   {false, u1_, v0_, v1_, +1.0}};
  for (const Edge& e : edges) {
    const QuadratureRule rule = gauss_legendre(n, e.lo, e.hi);
    for (int i = 0; i < n; ++i) {
      const Vector u =
          e.along_u ? param2(rule.nodes[i], e.fixed) : param2(e.fixed, rule.nodes[i]);
      const SurfaceJet bj = jet(0, u);
      const SampleGeometry geom = sample_geometry(*this, bj);
      const Vector tangent = e.along_u ? bj.tangents.col(0) : bj.tangents.col(1);
      const Vector out_dir = e.outward * (e.along_u ? bj.tangents.col(1) : bj.tangents.col(0));
      const Vector that = tangent.normalized();
      Vector mu = out_dir - out_dir.dot(that) * that;
      mu.normalize();
      trace.samples.push_back(finish_boundary_sample(gauge, bj.x, mu, geom.normal,
                                                     tangent.norm() * rule.weights[i]));
    }
  }
  return trace;
}

SurfaceMesh RectanglePatch::surface_mesh(int resolution) const {
  SurfaceMesh mesh;
  mesh.dimension = 3;
  const int m = std::max(8, resolution);
  mesh.vertices.resize((m + 1) * (m + 1), 3);
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      const double u = u0_ + (u1_ - u0_) * i / m;
      const double v = v0_ + (v1_ - v0_) * j / m;
      mesh.vertices.row(i * (m + 1) + j) = jet_(u, v).x.transpose();
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int a = i * (m + 1) + j, b = a + 1, c = a + m + 1, d = c + 1;
      tris.push_back({a, c, d});
      tris.push_back({a, d, b});
    }
  }
  mesh.triangles.resize(static_cast<int>(tris.size()), 3);
  for (std::size_t t = 0; t < tris.size(); ++t)
    mesh.triangles.row(t) << tris[t][0], tris[t][1], tris[t][2];
  std::vector<int> loop;
  for (int j = 0; j <= m; ++j) loop.push_back(j);
  for (int i = 1; i <= m; ++i) loop.push_back(i * (m + 1) + m);
  for (int j = m - 1; j >= 0; --j) loop.push_back(m * (m + 1) + j);
  for (int i = m - 1; i >= 1; --i) loop.push_back(i * (m + 1));
  mesh.boundary_loops.push_back(loop);
  return mesh;
}

// DiskGraphPatch ----------------------------------------------------------------

DiskGraphPatch::DiskGraphPatch(Fn f, Fn fu, Fn fv, Fn fuu, Fn fuv, Fn fvv, double radius,
                               bool normal_positive_last)
    : f_(std::move(f)),
      fu_(std::move(fu)),
      fv_(std::move(fv)),
      fuu_(std::move(fuu)),
      fuv_(std::move(fuv)),
      fvv_(std::move(fvv)),
      radius_(radius),
      normal_positive_last_(normal_positive_last) {
  if (radius_ <= 0.0) fail(ErrorCode::InvalidArgument, "disk radius must be positive");
}

SurfaceJet DiskGraphPatch::jet(int, const Vector& p) const {
  const double rho = p[0], phi = p[1];
  const double c = std::cos(phi), s = std::sin(phi);
  const double u = rho * c, v = rho * s;
  const double fu = fu_(u, v), fv = fv_(u, v);
  const double fuu = fuu_(u, v), fuv = fuv_(u, v), fvv = fvv_(u, v);
  const double g_r = fu * c + fv * s;
  const double g_p = rho * (-fu * s + fv * c);
  const double g_rr = fuu * c * c + 2.0 * fuv * c * s + fvv * s * s;
  const double g_rp =
      -fu * s + fv * c + rho * (-fuu * c * s + fuv * (c * c - s * s) + fvv * c * s);
  const double g_pp =
      rho * rho * (fuu * s * s - 2.0 * fuv * c * s + fvv * c * c) - rho * (fu * c + fv * s);
  SurfaceJet jet;
  jet.x = Vector(3);
  jet.x << u, v, f_(u, v);
  jet.tangents.resize(3, 2);
  jet.tangents.col(0) << c, s, g_r;
  jet.tangents.col(1) << -rho * s, rho * c, g_p;
  Vector xrr(3), xrp(3), xpp(3);
  xrr << 0, 0, g_rr;
  xrp << -s, c, g_rp;
  xpp << -rho * c, -rho * s, g_pp;
  jet.second = {xrr, xrp, xpp};
  return jet;
}

double DiskGraphPatch::orientation_sign(const Vector&, const Vector& raw_normal) const {
  const double last = raw_normal[2];
  if (std::abs(last) < 1e-12) return 1.0;
  return (last > 0.0) == normal_positive_last_ ? 1.0 : -1.0;
}

void DiskGraphPatch::build_samples(int resolution, std::vector<SurfaceSample>& samples,
                                   std::vector<WettingSample>& wetting,
                                   bool* wetting_flux_zero) const {
  samples.clear();
  wetting.clear();
  *wetting_flux_zero = false;
  const QuadratureRule rr = gauss_legendre(resolution, 0.0, radius_);
  const QuadratureRule pr = periodic_rule(2 * resolution, 2.0 * kPi);
  for (std::size_t j = 0; j < pr.nodes.size(); ++j)
    for (std::size_t i = 0; i < rr.nodes.size(); ++i)
      samples.push_back(make_sample(*this, 0, param2(rr.nodes[i], pr.nodes[j]),
                                    rr.weights[i] * pr.weights[j], 1.0));
}

BoundaryTrace DiskGraphPatch::build_boundary_trace(const AnisotropyGauge& gauge,
                                                   int resolution) const {
  BoundaryTrace trace;
  trace.dimension = 3;
  const QuadratureRule rule = periodic_rule(8 * resolution, 2.0 * kPi);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const SurfaceJet bj = jet(0, param2(radius_, rule.nodes[j]));
    const SampleGeometry geom = sample_geometry(*this, bj);
    const Vector that = bj.tangents.col(1).normalized();
    Vector mu = bj.tangents.col(0) - bj.tangents.col(0).dot(that) * that;
    mu.normalize();
    trace.samples.push_back(finish_boundary_sample(
        gauge, bj.x, mu, geom.normal, bj.tangents.col(1).norm() * rule.weights[j]));
  }
  return trace;
}

SurfaceMesh DiskGraphPatch::surface_mesh(int resolution) const {
  SurfaceMesh mesh;
  mesh.dimension = 3;
  const int rows = std::max(8, resolution);
  const int cols = std::max(16, 2 * resolution);
  std::vector<Vector> verts;
  std::vector<std::array<int, 3>> tris;
  verts.push_back(jet(0, param2(0.0, 0.0)).x);
  std::vector<int> last_row;
  for (int i = 1; i <= rows; ++i) {
    std::vector<int> row(cols);
    for (int j = 0; j < cols; ++j) {
      row[j] = static_cast<int>(verts.size());
      verts.push_back(jet(0, param2(radius_ * i / rows, 2.0 * kPi * j / cols)).x);
    }
    if (i == 1) {
      for (int j = 0; j < cols; ++j) tris.push_back({0, row[j], row[(j + 1) % cols]});
    } else {
      for (int j = 0; j < cols; ++j) {
        const int a = last_row[j], b = last_row[(j + 1) % cols];
        const int c = row[j], d = row[(j + 1) % cols];
        tris.push_back({a, c, d});
        tris.push_back({a, d, b});
      }
    }
    last_row = row;
  }
  mesh.boundary_loops.push_back(last_row);
  mesh.vertices.resize(static_cast<int>(verts.size()), 3);
  for (std::size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(i) = verts[i].transpose();
  mesh.triangles.resize(static_cast<int>(tris.size()), 3);
  for (std::size_t i = 0; i < tris.size(); ++i)
    mesh.triangles.row(i) << tris[i][0], tris[i][1], tris[i][2];
  return mesh;
}

// Operations -------------------------------------------------------------------

QuadraturedSurface sample(std::shared_ptr<const ParametrizedPatch> patch, int resolution) {
  if (resolution < 4) fail(ErrorCode::InvalidArgument, "resolution must be >= 4");
  QuadraturedSurface surface;
  surface.patch = std::move(patch);
  surface.resolution = resolution;
  surface.patch->build_samples(resolution, surface.samples, surface.wetting,
                               &surface.wetting_flux_zero);
  for (const auto& s : surface.samples)
    if (!(s.weight > 0.0))
      fail(ErrorCode::DegenerateImmersion, "nonpositive quadrature weight");
  // Orientation continuity along shared-meridian neighbors.
  for (std::size_t i = 1; i < surface.samples.size(); ++i) {
    const auto& a = surface.samples[i - 1];
    const auto& b = surface.samples[i];
    if (a.chart == b.chart && a.u.size() == 2 && std::abs(a.u[1] - b.u[1]) < 1e-12 &&
        a.normal.dot(b.normal) <= 0.0)
      fail(ErrorCode::DegenerateImmersion, "normal orientation flips between neighbors");
  }
  if (surface.patch->closed() && resolution >= 8) {
    if (surface.normal_flux().norm() > 1e-3 * surface.area())
      fail(ErrorCode::DegenerateImmersion, "closed-surface normal flux does not vanish");
  }
  return surface;
}

FundamentalForms fundamental_forms(const ParametrizedPatch& patch, int chart,
                                   const Vector& u) {
  const SurfaceJet jet = patch.jet(chart, u);
  SampleGeometry g = sample_geometry(patch, jet);
  FundamentalForms forms;
  forms.metric = g.metric;
  forms.second = g.second;
  forms.normal = g.normal;
  forms.weingarten = g.metric.inverse() * g.second;
  return forms;
}

AnisotropicShapeData anisotropic_shape(const AnisotropyGauge& gauge,
                                       const QuadraturedSurface& surface) {
  AnisotropicShapeData data;
  data.samples.resize(surface.samples.size());
  const int n = surface.dimension() - 1;
  for (std::size_t i = 0; i < surface.samples.size(); ++i) {
    const SurfaceSample& s = surface.samples[i];
    ShapeSample& out = data.samples[i];
    TangentFrame frame;
    frame.base = s.normal;
    frame.basis = s.frame;
    const Matrix form = gauge.anisotropy_form(frame);
    out.nu_F = gauge.cahn_hoffman(s.normal);
    out.F_nu = gauge(s.normal);
    out.shape_operator = form * s.dnu;
    out.mean_curvature = out.shape_operator.trace();

    // Symmetrization through the positive square root of the anisotropy form
    // keeps the spectrum real by construction.
    Eigen::SelfAdjointEigenSolver<Matrix> form_eig(form);
    const Matrix sqrt_form = form_eig.operatorSqrt();
    Matrix sym = sqrt_form * s.dnu * sqrt_form;
    sym = 0.5 * (sym + sym.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    out.curvatures = eig.eigenvalues();
    out.principal_directions.resize(s.frame.rows(), n);
    for (int k = 0; k < n; ++k) {
      const Vector dir_frame = sqrt_form * eig.eigenvectors().col(k);
      out.principal_directions.col(k) = (s.frame * dir_frame).normalized();
    }
  }
  data.min_mean_curvature = std::numeric_limits<double>::infinity();
  data.max_mean_curvature = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const double h = data.samples[i].mean_curvature;
    if (h < data.min_mean_curvature) {
      data.min_mean_curvature = h;
      data.argmin_mean_curvature = static_cast<int>(i);
    }
    data.max_mean_curvature = std::max(data.max_mean_curvature, h);
  }
  return data;
}

BoundaryTrace boundary_trace(const ParametrizedPatch& patch, const AnisotropyGauge& gauge,
                             int resolution) {
  if (resolution < 4) fail(ErrorCode::InvalidArgument, "resolution must be >= 4");
  return patch.build_boundary_trace(gauge, resolution);
}

double integrate(const QuadraturedSurface& surface,
                 const std::function<double(const SurfaceSample&)>& integrand) {
  std::vector<double> terms(surface.samples.size());
  for (std::size_t i = 0; i < surface.samples.size(); ++i)
    terms[i] = surface.samples[i].weight * integrand(surface.samples[i]);
  return pairwise_sum(terms);
}

double enclosed_volume(const QuadraturedSurface& surface) {
  const double residual = surface.flux_closure_residual();
  if (residual > 1e-3)
    fail(ErrorCode::NotClosed,
         "flux-closure residual " + std::to_string(residual) + " exceeds 1e-3");
  const int d = surface.dimension();
  double volume = integrate(surface, [](const SurfaceSample& s) { return s.x.dot(s.normal); });
  if (!surface.wetting.empty() && !surface.wetting_flux_zero) {
    std::vector<double> terms(surface.wetting.size());
    for (std::size_t i = 0; i < surface.wetting.size(); ++i)
      terms[i] = surface.wetting[i].weight * surface.wetting[i].x.dot(surface.wetting[i].normal);
    volume += pairwise_sum(terms);
  }
  return volume / d;
}

double enclosed_volume(const QuadraturedSurface& surface, const ConvexContainer& container) {
  for (const auto& w : surface.wetting) {
    const StratumLabel label = container.classify(w.x);
    if (label.kind == StratumLabel::Kind::Outside)
      fail(ErrorCode::NotClosed, "wetted face leaves the container");
  }
  return enclosed_volume(surface);
}

}  // namespace wulffkit
