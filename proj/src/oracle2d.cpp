#include "wulffkit/oracle2d.hpp"

#include <algorithm>
#include <cmath>

namespace wulffkit {

namespace {

using Eigen::Vector2d;

double cross2(const Vector2d& a, const Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Vector2d& a, const Vector2d& b, const Vector2d& c,
                        const Vector2d& d) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double shoelace(const std::vector<Vector2d>& poly) {
  double sum = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vector2d& a = poly[i];
    const Vector2d& b = poly[(i + 1) % poly.size()];
    sum += cross2(a, b);
  }
  return 0.5 * sum;
}

bool point_in_polygon(const std::vector<Vector2d>& poly, const Vector2d& p) {
  // Even-odd rule with a slightly tilted ray to dodge vertex hits.
  const Vector2d dir(1.0, 0.5e-7);
  int crossings = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vector2d a = poly[i] - p;
    const Vector2d b = poly[(i + 1) % poly.size()] - p;
    const double sa = cross2(dir, a);
    const double sb = cross2(dir, b);
    if ((sa > 0) == (sb > 0)) continue;
    const double t = cross2(a, b - a) / cross2(dir, b - a);
    if (t > 0) ++crossings;
  }
  return (crossings % 2) == 1;
}

// Closed polygon consisting of the curve plus its closure path along the
// container wall (none for closed curves).
std::vector<Vector2d> closure_polygon(const PlanarCurve& curve,
                                      const ConvexContainer* container) {
  std::vector<Vector2d> poly = curve.vertices();
  if (curve.closed()) return poly;
  if (!container)
    fail(ErrorCode::PreconditionFailure, "open polylines need a container to close against");
  switch (container->kind()) {
    case ConvexContainer::Kind::HalfSpace:
      return poly;  // the implicit last-to-first edge is the wall chord
    case ConvexContainer::Kind::CircularCone:
    case ConvexContainer::Kind::Wedge:
    case ConvexContainer::Kind::Polytope: {
      // Route the closure through the cone/wedge vertex.
      Vector2d vertex;
      if (container->kind() == ConvexContainer::Kind::CircularCone) {
        vertex = Vector2d(container->cone_vertex()[0], container->cone_vertex()[1]);
      } else {
        // Corner of two facet lines.
        const auto& facets = container->facets();
        if (facets.size() < 2)
          fail(ErrorCode::PreconditionFailure, "cannot close the polyline on this container");
        Matrix a(2, 2);
        a.row(0) = facets[0].normal.transpose();
        a.row(1) = facets[1].normal.transpose();
        Vector b(2);
        b << facets[0].offset, facets[1].offset;
        const Vector corner = a.colPivHouseholderQr().solve(b);
        vertex = Vector2d(corner[0], corner[1]);
      }
      poly.push_back(vertex);
      return poly;
    }
    default:
      fail(ErrorCode::PreconditionFailure, "cannot close the polyline on this container");
  }
}

// Makes the stored normals outward for the enclosed region.
void orient_outward(PlanarCurve& curve, const std::vector<Vector2d>& polygon) {
  const int i = curve.size() / 2;
  double scale = 0.0;
  for (const auto& v : polygon) scale = std::max(scale, v.norm());
  const Vector2d probe =
      curve.vertices()[i] + 1e-5 * std::max(scale, 1.0) * curve.normal(i);
  if (point_in_polygon(polygon, probe)) curve.flip();
}

}  // namespace

PlanarCurve PlanarCurve::closed_polyline(std::vector<Vector2d> vertices) {
  if (vertices.size() < 64)
    fail(ErrorCode::InvalidArgument, "polylines need at least 64 vertices");
  PlanarCurve curve;
  curve.vertices_ = std::move(vertices);
  curve.closed_ = true;
  curve.validate_simple();
  if (shoelace(curve.vertices_) < 0.0)
    std::reverse(curve.vertices_.begin(), curve.vertices_.end());
  return curve;
}

PlanarCurve PlanarCurve::open_polyline(std::vector<Vector2d> vertices) {
  if (vertices.size() < 64)
    fail(ErrorCode::InvalidArgument, "polylines need at least 64 vertices");
  PlanarCurve curve;
  curve.vertices_ = std::move(vertices);
  curve.closed_ = false;
  curve.validate_simple();
  return curve;
}

void PlanarCurve::validate_simple() const {
  const int n = size();
  const int segments = closed_ ? n : n - 1;
  for (int i = 0; i < segments; ++i) {
    for (int j = i + 2; j < segments; ++j) {
      if (closed_ && i == 0 && j == segments - 1) continue;  // shared endpoint
      if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j],
                             vertices_[(j + 1) % n]))
        fail(ErrorCode::SelfIntersecting, "polyline intersects itself");
    }
  }
}

Eigen::Vector2d PlanarCurve::tangent(int i) const {
  const int n = size();
  Vector2d t;
  if (closed_) {
    t = vertices_[(i + 1) % n] - vertices_[(i + n - 1) % n];
  } else if (i == 0) {
    t = vertices_[1] - vertices_[0];
  } else if (i == n - 1) {
    t = vertices_[n - 1] - vertices_[n - 2];
  } else {
    t = vertices_[i + 1] - vertices_[i - 1];
  }
  return t.normalized();
}

double PlanarCurve::curvature(int i) const {
  const int n = size();
  int j = i;
  if (!closed_) j = std::clamp(i, 1, n - 2);  // endpoints copy their neighbor
  const Vector2d a = vertices_[(j + n - 1) % n];
  const Vector2d b = vertices_[j];
  const Vector2d c = vertices_[(j + 1) % n];
  // Circumcircle fit: curvature = 2 sin(angle) / opposite side.
  const double denom = (b - a).norm() * (c - b).norm() * (c - a).norm();
  if (denom < 1e-300) fail(ErrorCode::InvalidArgument, "degenerate polyline vertex");
  return flip_ * 2.0 * cross2(b - a, c - b) / denom;
}

double PlanarCurve::vertex_measure(int i) const {
  const int n = size();
  double measure = 0.0;
  if (closed_ || i > 0) measure += 0.5 * (vertices_[i] - vertices_[(i + n - 1) % n]).norm();
  if (closed_ || i < n - 1) measure += 0.5 * (vertices_[(i + 1) % n] - vertices_[i]).norm();
  return measure;
}

double PlanarCurve::perimeter() const {
  double sum = 0.0;
  const int n = size();
  const int segments = closed_ ? n : n - 1;
  for (int i = 0; i < segments; ++i)
    sum += (vertices_[(i + 1) % n] - vertices_[i]).norm();
  return sum;
}

double shoelace_area(const PlanarCurve& curve, const ConvexContainer* container) {
  return std::abs(shoelace(closure_polygon(curve, container)));
}

double polygon_hk(const AnisotropyGauge& gauge, const PlanarCurve& curve,
                  const ConvexContainer* container) {
  if (gauge.dimension() != 2)
    fail(ErrorCode::InvalidArgument, "planar oracle needs a planar gauge");
  const std::vector<Vector2d> polygon = closure_polygon(curve, container);
  PlanarCurve oriented = curve;
  orient_outward(oriented, polygon);

  std::vector<double> terms(oriented.size());
  for (int i = 0; i < oriented.size(); ++i) {
    const double kappa = oriented.curvature(i);
    if (!(kappa > 1e-12))
      fail(ErrorCode::NotMeanConvex,
           "nonpositive curvature at vertex " + std::to_string(i));
    Vector nu(2);
    nu << oriented.normal(i).x(), oriented.normal(i).y();
    const Matrix form = gauge.anisotropy_form(TangentFrame::at(nu));
    const double kappa_f = form(0, 0) * kappa;
    terms[i] = gauge(nu) / kappa_f * oriented.vertex_measure(i);
  }
  return pairwise_sum(terms) / (2.0 * std::abs(shoelace(polygon)));
}

double raster_sweep(const AnisotropyGauge& gauge, const PlanarCurve& curve,
                    const ConvexContainer* container, int grid_resolution) {
  if (grid_resolution < 16) fail(ErrorCode::InvalidArgument, "grid resolution must be >= 16");
  const std::vector<Vector2d> polygon = closure_polygon(curve, container);
  PlanarCurve oriented = curve;
  orient_outward(oriented, polygon);

  Vector2d lo = polygon[0], hi = polygon[0];
  for (const auto& v : polygon) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double cell = (hi - lo).maxCoeff() / grid_resolution;
  const int nx = static_cast<int>(std::ceil((hi.x() - lo.x()) / cell)) + 1;
  const int ny = static_cast<int>(std::ceil((hi.y() - lo.y()) / cell)) + 1;

  std::vector<char> inside(static_cast<std::size_t>(nx) * ny, 0);
  std::vector<char> hit(static_cast<std::size_t>(nx) * ny, 0);
  long n_inside = 0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const Vector2d center(lo.x() + (i + 0.5) * cell, lo.y() + (j + 0.5) * cell);
      if (point_in_polygon(polygon, center)) {
        inside[static_cast<std::size_t>(i) * ny + j] = 1;
        ++n_inside;
      }
    }
  }
  if (n_inside == 0) return 0.0;

  // Vertex data for the sweep; positive curvature is a precondition.
  struct SweepPoint {
    Vector2d x, nu_f;
    double t_max;
  };
  std::vector<SweepPoint> points(oriented.size());
  for (int i = 0; i < oriented.size(); ++i) {
    const double kappa = oriented.curvature(i);
    if (!(kappa > 1e-12))
      fail(ErrorCode::NotMeanConvex,
           "nonpositive curvature at vertex " + std::to_string(i));
    Vector nu(2);
    nu << oriented.normal(i).x(), oriented.normal(i).y();
    const Matrix form = gauge.anisotropy_form(TangentFrame::at(nu));
    const Vector nf = gauge.cahn_hoffman(nu);
    points[i] = {oriented.vertices()[i], Vector2d(nf[0], nf[1]), 1.0 / (form(0, 0) * kappa)};
  }

  const auto mark = [&](const Vector2d& p) {
    const int i = static_cast<int>(std::floor((p.x() - lo.x()) / cell));
    const int j = static_cast<int>(std::floor((p.y() - lo.y()) / cell));
    if (i >= 0 && i < nx && j >= 0 && j < ny)
      hit[static_cast<std::size_t>(i) * ny + j] = 1;
  };

  // Fine (x, t) lattice of the sweep: subdivide segments below half a cell
  // and march t in half-cell steps.
  const int segments = oriented.closed() ? oriented.size() : oriented.size() - 1;
  const double step = 0.5 * cell;
  for (int s = 0; s < segments; ++s) {
    const int s2 = (s + 1) % oriented.size();
    const double len = (points[s2].x - points[s].x).norm();
    const int subdivisions = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int a = 0; a < subdivisions; ++a) {
      const double f = static_cast<double>(a) / subdivisions;
      const Vector2d x = (1 - f) * points[s].x + f * points[s2].x;
      const Vector2d nu_f = (1 - f) * points[s].nu_f + f * points[s2].nu_f;
      const double t_max = (1 - f) * points[s].t_max + f * points[s2].t_max;
      const int tn = std::max(2, static_cast<int>(std::ceil(t_max / step)) + 1);
      for (int k = 0; k <= tn; ++k) mark(x - (t_max * k / tn) * nu_f);
    }
  }

  long covered = 0;
  for (std::size_t i = 0; i < inside.size(); ++i)
    if (inside[i] && hit[i]) ++covered;
  return static_cast<double>(covered) / n_inside;
}

PlanarCurve planar_curve_from_patch(const CurvePatch& patch, int n_vertices) {
  n_vertices = std::max(n_vertices, 64);
  std::vector<Vector2d> vertices;
  if (patch.closed()) {
    for (int i = 0; i < n_vertices; ++i) {
      const Vector x = patch.map().value(patch.direction(2.0 * kPi * i / n_vertices));
      vertices.emplace_back(x[0], x[1]);
    }
    return PlanarCurve::closed_polyline(std::move(vertices));
  }
  for (int i = 0; i <= n_vertices; ++i) {
    const double theta =
        patch.theta_lo() + (patch.theta_hi() - patch.theta_lo()) * i / n_vertices;
    const Vector x = patch.map().value(patch.direction(theta));
    vertices.emplace_back(x[0], x[1]);
  }
  return PlanarCurve::open_polyline(std::move(vertices));
}

}  // namespace wulffkit
