#include "wulffkit/domain.hpp"

#include <algorithm>
#include <cmath>

#include "wulffkit/simplex.hpp"
#include "wulffkit/surface.hpp"

namespace wulffkit {

namespace {

constexpr double kBox = 1e3;  // box bound making container LPs bounded

Vector normalized_or_fail(const Vector& v, const char* what) {
  const double n = v.norm();
  if (n < 1e-14) fail(ErrorCode::ZeroVector, what);
  return v / n;
}

// Cross-product magnitude |a x b| for unit vectors in d = 2, 3.
double wedge_norm(const Vector& a, const Vector& b) {
  if (a.size() == 2) return std::abs(a[0] * b[1] - a[1] * b[0]);
  Eigen::Vector3d u(a[0], a[1], a[2]), v(b[0], b[1], b[2]);
  return u.cross(v).norm();
}

// Chebyshev center of {A x <= b} intersected with a box: maximize r subject
// to <n_j, x> + r <= b_j (unit normals).
LinearProgramResult chebyshev_center(const std::vector<HalfSpaceSpec>& facets, int dim,
                                     double box) {
  const int m = static_cast<int>(facets.size());
  Matrix a = Matrix::Zero(m + 2 * dim + 1, dim + 1);
  Vector b(m + 2 * dim + 1);
  for (int i = 0; i < m; ++i) {
    a.row(i).head(dim) = facets[i].normal.transpose();
    a(i, dim) = 1.0;
    b[i] = facets[i].offset;
  }
  for (int k = 0; k < dim; ++k) {
    a(m + 2 * k, k) = 1.0;
    b[m + 2 * k] = box;
    a(m + 2 * k + 1, k) = -1.0;
    b[m + 2 * k + 1] = box;
  }
  a(m + 2 * dim, dim) = -1.0;
  b[m + 2 * dim] = 0.0;  // r >= 0
  Vector c = Vector::Zero(dim + 1);
  c[dim] = 1.0;
  return solve_linear_program(a, b, c);
}

}  // namespace

void ConvexContainer::finish(std::optional<double> tau) {
  double s = 1.0;
  for (const auto& f : facets_) s = std::max(s, std::abs(f.offset));
  if (vertex_.size() > 0) s = std::max(s, vertex_.norm());
  if (center_.size() > 0) s = std::max(s, center_.norm() + radius_);
  if (interior_point_.size() > 0) s = std::max(s, interior_point_.norm());
  scale_ = s;
  tau_ = tau.value_or(1e-7 * scale_);
  if (tau_ <= 0.0) fail(ErrorCode::InvalidArgument, "classification tolerance must be positive");
}

ConvexContainer ConvexContainer::half_space(const Vector& normal, double offset,
                                            std::optional<double> tau) {
  ConvexContainer k;
  k.kind_ = Kind::HalfSpace;
  k.dimension_ = static_cast<int>(normal.size());
  k.facets_.push_back({normalized_or_fail(normal, "half-space normal"), offset});
  k.interior_point_ = (offset - 1.0) * k.facets_[0].normal;
  k.finish(tau);
  return k;
}

ConvexContainer ConvexContainer::ball(const Vector& center, double radius,
                                      std::optional<double> tau) {
  if (radius <= 0.0) fail(ErrorCode::InvalidArgument, "ball radius must be positive");
  ConvexContainer k;
  k.kind_ = Kind::Ball;
  k.dimension_ = static_cast<int>(center.size());
  k.center_ = center;
  k.radius_ = radius;
  k.interior_point_ = center;
  k.finish(tau);
  return k;
}

ConvexContainer ConvexContainer::circular_cone(const Vector& vertex, const Vector& axis,
                                               double half_angle, std::optional<double> tau) {
  if (!(half_angle > 0.0 && half_angle < kPi))
    fail(ErrorCode::InvalidArgument, "cone half-angle must lie in (0, pi)");
  ConvexContainer k;
  k.kind_ = Kind::CircularCone;
  k.dimension_ = static_cast<int>(vertex.size());
  k.vertex_ = vertex;
  k.axis_ = normalized_or_fail(axis, "cone axis");
  k.half_angle_ = half_angle;
  if (k.dimension_ == 2) {
    if (half_angle >= kPi / 2)
      fail(ErrorCode::InvalidArgument, "planar sectors wider than a half-plane are unsupported");
    // The planar sector is the wedge of two half-planes through the vertex.
    const double ca = std::cos(half_angle), sa = std::sin(half_angle);
    const Eigen::Vector2d a2(k.axis_[0], k.axis_[1]);
    const Eigen::Vector2d up(ca * a2.x() - sa * a2.y(), sa * a2.x() + ca * a2.y());
    const Eigen::Vector2d dn(ca * a2.x() + sa * a2.y(), -sa * a2.x() + ca * a2.y());
    const Eigen::Vector2d n_up = rot90(up);          // outward of the +beta ray
    const Eigen::Vector2d n_dn = -rot90(dn);         // outward of the -beta ray
    Vector nu(2), nd(2);
    nu << n_up.x(), n_up.y();
    nd << n_dn.x(), n_dn.y();
    k.facets_.push_back({nu, nu.dot(vertex)});
    k.facets_.push_back({nd, nd.dot(vertex)});
    k.cone_as_polytope_ = true;
  } else if (half_angle >= kPi / 2) {
    fail(ErrorCode::InvalidArgument, "convex cones require a half-angle below pi/2");
  }
  k.interior_point_ = vertex + k.axis_;
  k.finish(tau);
  return k;
}

ConvexContainer ConvexContainer::cone_over_polygon(const Vector& vertex,
                                                   const std::vector<Vector>& sector_vertices,
                                                   std::optional<double> tau) {
  if (vertex.size() != 3)
    fail(ErrorCode::InvalidArgument, "polygonal sectors are three-dimensional");
  const int m = static_cast<int>(sector_vertices.size());
  if (m < 3) fail(ErrorCode::InvalidArgument, "a spherical polygon needs >= 3 vertices");
  ConvexContainer k;
  k.kind_ = Kind::CircularCone;  // classified through the facet machinery
  k.cone_as_polytope_ = true;
  k.dimension_ = 3;
  k.vertex_ = vertex;
  Vector mean = Vector::Zero(3);
  for (const auto& v : sector_vertices) mean += v.normalized();
  k.axis_ = normalized_or_fail(mean, "sector polygon degenerate");
  k.half_angle_ = 0.0;
  for (int i = 0; i < m; ++i) {
    const Eigen::Vector3d a(sector_vertices[i].normalized()[0],
                            sector_vertices[i].normalized()[1],
                            sector_vertices[i].normalized()[2]);
    const Vector bnext = sector_vertices[(i + 1) % m].normalized();
    const Eigen::Vector3d b(bnext[0], bnext[1], bnext[2]);
    Eigen::Vector3d n = a.cross(b);
    if (n.norm() < 1e-12)
      fail(ErrorCode::InvalidArgument, "degenerate sector polygon edge");
    n.normalize();
    Vector nn(3);
    nn << n.x(), n.y(), n.z();
    if (nn.dot(k.axis_) > 0.0) nn = -nn;  // outward
    k.facets_.push_back({nn, nn.dot(vertex)});
  }
  k.interior_point_ = vertex + k.axis_;
  for (const auto& f : k.facets_) {
    if (f.normal.dot(k.interior_point_) >= f.offset)
      fail(ErrorCode::InvalidArgument, "sector polygon is not convex around its mean axis");
  }
  k.finish(tau);
  return k;
}

ConvexContainer ConvexContainer::polytope(std::vector<HalfSpaceSpec> facets,
                                          std::optional<double> tau) {
  if (facets.empty()) fail(ErrorCode::InvalidArgument, "polytope needs at least one facet");
  ConvexContainer k;
  k.kind_ = Kind::Polytope;
  k.dimension_ = static_cast<int>(facets[0].normal.size());
  for (auto& f : facets) {
    const double n = f.normal.norm();
    if (n < 1e-14) fail(ErrorCode::ZeroVector, "facet normal must be nonzero");
    f.offset /= n;
    f.normal /= n;
  }
  k.facets_ = std::move(facets);

  const auto cheb = chebyshev_center(k.facets_, k.dimension_, kBox);
  if (!cheb.feasible || cheb.objective <= 1e-9)
    fail(ErrorCode::NotConvex, "polytope has empty interior");
  k.interior_point_ = cheb.point.head(k.dimension_);

  // Irredundancy: dropping any facet must open the feasible set past it.
  const int m = static_cast<int>(k.facets_.size());
  for (int l = 0; l < m && m > 1; ++l) {
    Matrix a = Matrix::Zero(m - 1 + 2 * k.dimension_, k.dimension_);
    Vector b(m - 1 + 2 * k.dimension_);
    int row = 0;
    for (int j = 0; j < m; ++j) {
      if (j == l) continue;
      a.row(row) = k.facets_[j].normal.transpose();
      b[row] = k.facets_[j].offset;
      ++row;
    }
    for (int kk = 0; kk < k.dimension_; ++kk) {
      a(row, kk) = 1.0;
      b[row++] = kBox;
      a(row, kk) = -1.0;
      b[row++] = kBox;
    }
    const auto lp = solve_linear_program(a, b, k.facets_[l].normal);
    if (lp.feasible && lp.bounded && lp.objective <= k.facets_[l].offset + 1e-9)
      fail(ErrorCode::InvalidArgument, "redundant facet in polytope description");
  }
  k.finish(tau);
  return k;
}

ConvexContainer ConvexContainer::wedge(const HalfSpaceSpec& a, const HalfSpaceSpec& b,
                                       std::optional<double> tau) {
  ConvexContainer k = polytope({a, b}, tau);
  k.kind_ = Kind::Wedge;
  const double alpha = k.dihedral_angle();
  if (!(alpha > 1e-9 && alpha < kPi - 1e-9))
    fail(ErrorCode::InvalidArgument, "wedge dihedral angle must lie in (0, pi)");
  return k;
}

double ConvexContainer::dihedral_angle() const {
  if (facets_.size() != 2)
    fail(ErrorCode::InvalidArgument, "dihedral angle requires exactly two facets");
  const double c = -facets_[0].normal.dot(facets_[1].normal);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

StratumLabel ConvexContainer::classify(const Vector& x) const {
  StratumLabel label;
  switch (kind_) {
    case Kind::Ball: {
      const double r = (x - center_).norm();
      if (r > radius_ + tau_) {
        label.kind = StratumLabel::Kind::Outside;
      } else if (r >= radius_ - tau_) {
        label.kind = StratumLabel::Kind::Regular;
        label.normal = (x - center_) / r;
      }
      return label;
    }
    case Kind::CircularCone: {
      if (!cone_as_polytope_) {
        const Vector w = x - vertex_;
        const double r = w.norm();
        if (r <= tau_) {
          label.kind = StratumLabel::Kind::HigherSingular;
          return label;
        }
        const double alpha = angle_between(w, axis_);
        const double s = r * std::sin(std::clamp(alpha - half_angle_, -kPi / 2, kPi / 2));
        if (s > tau_) {
          label.kind = StratumLabel::Kind::Outside;
        } else if (s >= -tau_) {
          label.kind = StratumLabel::Kind::Regular;
          label.normal = (std::cos(half_angle_) * (w / r) - axis_).normalized();
        }
        return label;
      }
      if ((x - vertex_).norm() <= tau_) {
        label.kind = StratumLabel::Kind::HigherSingular;
        return label;
      }
      break;  // fall through to facet classification
    }
    default:
      break;
  }

  int active = 0;
  for (const auto& f : facets_) {
    const double s = f.normal.dot(x) - f.offset;
    if (s > tau_) {
      label.kind = StratumLabel::Kind::Outside;
      label.normal.resize(0);
      return label;
    }
    if (s >= -tau_) {
      ++active;
      if (active == 1) {
        label.kind = StratumLabel::Kind::Regular;
        label.normal = f.normal;
      } else if (active == 2) {
        label.kind = StratumLabel::Kind::Edge;
        label.normal2 = f.normal;
      } else {
        label.kind = StratumLabel::Kind::HigherSingular;
      }
    }
  }
  return label;
}

bool ConvexContainer::contains(const Vector& x) const {
  return classify(x).kind != StratumLabel::Kind::Outside;
}

std::optional<Vector> ConvexContainer::apex() const {
  if (kind_ == Kind::CircularCone) return vertex_;
  return std::nullopt;
}

std::optional<Vector> ConvexContainer::nearest_apex(const Vector& reference) const {
  if (kind_ == Kind::CircularCone && !cone_as_polytope_) return vertex_;
  if (kind_ == Kind::Ball || facets_.empty()) return std::nullopt;
  if (kind_ == Kind::CircularCone) return vertex_;
  // The container is a cone from p exactly when every facet plane passes
  // through p; the nearest such point solves a least-squares projection.
  const int m = static_cast<int>(facets_.size());
  Matrix a(m, dimension_);
  Vector b(m);
  for (int i = 0; i < m; ++i) {
    a.row(i) = facets_[i].normal.transpose();
    b[i] = facets_[i].offset;
  }
  const Vector correction =
      a.completeOrthogonalDecomposition().solve(b - a * reference);
  const Vector p = reference + correction;
  if ((a * p - b).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, scale_))
    return std::nullopt;  // the facet planes share no common point
  return p;
}

std::optional<double> ConvexContainer::singular_set_distance(const Vector& x) const {
  if (kind_ == Kind::CircularCone) return (x - vertex_).norm();
  if (kind_ == Kind::Wedge) {
    // Distance to the edge line (d=3) or corner point (d=2) of the wedge.
    Matrix a(2, dimension_);
    a.row(0) = facets_[0].normal.transpose();
    a.row(1) = facets_[1].normal.transpose();
    Vector b(2);
    b << facets_[0].offset, facets_[1].offset;
    const Vector p0 = a.colPivHouseholderQr().solve(b);
    Vector w = x - p0;
    if (dimension_ == 3) {
      Eigen::Vector3d n1(facets_[0].normal[0], facets_[0].normal[1], facets_[0].normal[2]);
      Eigen::Vector3d n2(facets_[1].normal[0], facets_[1].normal[1], facets_[1].normal[2]);
      Eigen::Vector3d dir = n1.cross(n2).normalized();
      Eigen::Vector3d w3(w[0], w[1], w[2]);
      return (w3 - w3.dot(dir) * dir).norm();
    }
    return w.norm();
  }
  return std::nullopt;
}

AdmissibilityReport admissibility_report(const AnisotropyGauge& gauge,
                                         const BoundaryTrace& trace,
                                         const ConvexContainer& container) {
  AdmissibilityReport report;
  report.transversality_margin = kPi / 2;
  report.max_anisotropic_normal_product = -std::numeric_limits<double>::infinity();
  report.max_edge_normal_product = -std::numeric_limits<double>::infinity();
  for (const auto& s : trace.samples) {
    const StratumLabel label = container.classify(s.x);
    switch (label.kind) {
      case StratumLabel::Kind::Regular: {
        ++report.regular_samples;
        const double d = s.nu_F.dot(label.normal);
        report.max_anisotropic_normal_product =
            std::max(report.max_anisotropic_normal_product, d);
        report.free_boundary_residual = std::max(report.free_boundary_residual, std::abs(d));
        const double sine = std::clamp(wedge_norm(s.normal, label.normal), 0.0, 1.0);
        report.transversality_margin = std::min(report.transversality_margin, std::asin(sine));
        const Vector mu_f_hat = s.mu_F.normalized();
        report.conormal_alignment_residual =
            std::max(report.conormal_alignment_residual,
                     (mu_f_hat - mu_f_hat.dot(label.normal) * label.normal).norm());
        break;
      }
      case StratumLabel::Kind::Edge: {
        if (!gauge.is_isotropic())
          fail(ErrorCode::AnisotropicOnEdge,
               "anisotropic boundary contact with a container edge");
        ++report.edge_samples;
        report.max_edge_normal_product = std::max(
            {report.max_edge_normal_product, s.normal.dot(label.normal),
             s.normal.dot(label.normal2)});
        break;
      }
      case StratumLabel::Kind::HigherSingular:
        fail(ErrorCode::SingularBoundaryContact,
             "boundary sample touches a container vertex");
      default:
        fail(ErrorCode::PreconditionFailure,
             "boundary sample does not lie on the container boundary");
    }
  }
  if (report.regular_samples == 0)
    report.max_anisotropic_normal_product = 0.0;
  if (report.edge_samples == 0) report.max_edge_normal_product = 0.0;
  return report;
}

double capillary_residual(const BoundaryTrace& trace, const ConvexContainer& container,
                          double contact_angle) {
  double residual = 0.0;
  for (const auto& s : trace.samples) {
    const StratumLabel label = container.classify(s.x);
    if (label.kind != StratumLabel::Kind::Regular)
      fail(ErrorCode::PreconditionFailure,
           "capillary residual requires regular boundary contact");
    const Vector& nbar = label.normal;
    // Outward co-normal of the boundary inside the container wall, from the
    // fact that {nu, mu} and {nu_bar, N} span the same two-plane.
    const Vector nu_bar =
        (-s.normal.dot(nbar) * s.mu + s.mu.dot(nbar) * s.normal).normalized();
    const Vector target = std::sin(contact_angle) * nbar + std::cos(contact_angle) * nu_bar;
    residual = std::max(residual, (s.mu_F.normalized() - target).norm());
  }
  return residual;
}

std::pair<bool, bool> wedge_touch_inequalities(double eta1, double eta2, double alpha) {
  for (const double a : {eta1, eta2, alpha}) {
    if (!(a > 0.0 && a < kPi))
      fail(ErrorCode::InvalidArgument, "wedge-touch angles must lie in (0, pi)");
  }
  const double lhs1 = std::cos(eta2) + std::cos(eta1) * std::cos(alpha);
  const double lhs2 = std::cos(eta1) + std::cos(eta2) * std::cos(alpha);
  return {lhs1 >= 0.0, lhs2 >= 0.0};
}

}  // namespace wulffkit
