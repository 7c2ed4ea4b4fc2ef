#include "wulffkit/gauge.hpp"

#include <algorithm>
#include <cmath>

namespace wulffkit {

namespace {

constexpr double kGoldenAngle = 2.39996322972865332;  // pi (3 - sqrt 5)

struct Legendre {
  double p, dp, ddp;
};

Legendre legendre(int degree, double t) {
  if (degree == 0) return {1.0, 0.0, 0.0};
  if (degree == 1) return {t, 1.0, 0.0};
  double p0 = 1.0, p1 = t;
  double d0 = 0.0, d1 = 1.0;
  double dd0 = 0.0, dd1 = 0.0;
  for (int k = 1; k < degree; ++k) {
    const double a = (2.0 * k + 1.0) / (k + 1.0);
    const double b = static_cast<double>(k) / (k + 1.0);
    const double p2 = a * t * p1 - b * p0;
    const double d2 = a * (p1 + t * d1) - b * d0;
    const double dd2 = a * (2.0 * d1 + t * dd1) - b * dd0;
    p0 = p1; p1 = p2;
    d0 = d1; d1 = d2;
    dd0 = dd1; dd1 = dd2;
  }
  return {p1, d1, dd1};
}

Vector require_nonzero(const Vector& xi) {
  if (xi.norm() < 1e-14) fail(ErrorCode::ZeroVector, "gauge evaluated at the zero vector");
  return xi;
}

}  // namespace

TangentFrame TangentFrame::at(const Vector& z) {
  if (std::abs(z.norm() - 1.0) > 1e-10)
    fail(ErrorCode::NonUnitInput, "tangent frame base must be a unit vector");
  const int d = static_cast<int>(z.size());
  TangentFrame frame;
  frame.base = z;
  frame.basis.resize(d, d - 1);
  if (d == 2) {
    frame.basis.col(0) = rot90(Eigen::Vector2d(z[0], z[1]));
    return frame;
  }
  // Seed with the coordinate axis least aligned with z, then Gram-Schmidt.
  int seed = 0;
  for (int k = 1; k < d; ++k)
    if (std::abs(z[k]) < std::abs(z[seed])) seed = k;
  Vector b1 = Vector::Unit(d, seed);
  b1 -= b1.dot(z) * z;
  b1.normalize();
  frame.basis.col(0) = b1;
  if (d == 3) {
    Eigen::Vector3d zz(z[0], z[1], z[2]), bb(b1[0], b1[1], b1[2]);
    frame.basis.col(1) = zz.cross(bb);
  } else {
    for (int k = 1; k < d - 1; ++k) {
      Vector v = Vector::Unit(d, (seed + k + 1) % d);
      v -= v.dot(z) * z;
      for (int j = 0; j < k; ++j) v -= v.dot(frame.basis.col(j)) * frame.basis.col(j);
      frame.basis.col(k) = v.normalized();
    }
  }
  return frame;
}

std::vector<Vector> quasi_uniform_directions(int dimension, int count) {
  std::vector<Vector> dirs;
  dirs.reserve(count);
  if (dimension == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * kPi * (i + 0.5) / count;
      Vector z(2);
      z << std::cos(a), std::sin(a);
      dirs.push_back(z);
    }
    return dirs;
  }
  if (dimension == 3) {
    for (int i = 0; i < count; ++i) {
      const double c = 1.0 - (2.0 * i + 1.0) / count;  // cos(theta), midpoint strata
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      const double a = kGoldenAngle * i;
      Vector z(3);
      z << s * std::cos(a), s * std::sin(a), c;
      dirs.push_back(z);
    }
    return dirs;
  }
  fail(ErrorCode::InvalidArgument, "quasi-uniform directions only for d = 2, 3");
}

AnisotropyGauge AnisotropyGauge::isotropic(int dimension) {
  if (dimension < 2) fail(ErrorCode::InvalidArgument, "dimension must be >= 2");
  AnisotropyGauge g;
  g.family_ = Family::Isotropic;
  g.dimension_ = dimension;
  return g;
}

AnisotropyGauge AnisotropyGauge::ellipsoidal(const Matrix& metric) {
  if (metric.rows() != metric.cols() || metric.rows() < 2)
    fail(ErrorCode::InvalidArgument, "ellipsoidal metric must be square, d >= 2");
  if ((metric - metric.transpose()).norm() > 1e-12 * metric.norm())
    fail(ErrorCode::InvalidArgument, "ellipsoidal metric must be symmetric");
  Eigen::LLT<Matrix> llt(metric);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::NotConvex, "ellipsoidal metric must be positive definite");
  AnisotropyGauge g;
  g.family_ = Family::Ellipsoidal;
  g.dimension_ = static_cast<int>(metric.rows());
  g.metric_ = metric;
  g.metric_inv_ = llt.solve(Matrix::Identity(g.dimension_, g.dimension_));
  return g;
}

AnisotropyGauge AnisotropyGauge::capillary(double contact_angle, const Vector& axis) {
  if (!(contact_angle > 0.0 && contact_angle < kPi))
    fail(ErrorCode::InvalidArgument, "capillary contact angle must lie in (0, pi)");
  if (axis.norm() < 1e-14) fail(ErrorCode::ZeroVector, "capillary axis must be nonzero");
  AnisotropyGauge g;
  g.family_ = Family::Capillary;
  g.dimension_ = static_cast<int>(axis.size());
  g.angle_ = contact_angle;
  g.axis_ = axis.normalized();
  return g;
}

AnisotropyGauge AnisotropyGauge::perturbed(const AnisotropyGauge& base,
                                           std::vector<PerturbationTerm> terms) {
  if (base.family_ == Family::Perturbed)
    fail(ErrorCode::InvalidArgument, "perturbed gauges cannot be nested");
  AnisotropyGauge g = base;
  g.family_ = Family::Perturbed;
  g.base_family_ = base.family_;
  for (auto& term : terms) {
    if (term.degree < 1) fail(ErrorCode::InvalidArgument, "perturbation degree must be >= 1");
    if (term.axis.size() != base.dimension_)
      fail(ErrorCode::InvalidArgument, "perturbation axis dimension mismatch");
    if (term.axis.norm() < 1e-14) fail(ErrorCode::ZeroVector, "perturbation axis must be nonzero");
    term.axis.normalize();
  }
  g.terms_ = std::move(terms);
  g.validate_convexity();
  return g;
}

AnisotropyGauge AnisotropyGauge::with_finite_differences(double step) const {
  if (!(step > 0.0 && step < 0.5))
    fail(ErrorCode::InvalidArgument, "finite-difference step must lie in (0, 0.5)");
  AnisotropyGauge g = *this;
  g.analytic_ = false;
  g.fd_step_ = step;
  return g;
}

void AnisotropyGauge::validate_convexity() const {
  const int res = dimension_ == 2 ? 256 : 64;
  for (const Vector& z : quasi_uniform_directions(dimension_, dimension_ == 2 ? res : res * res)) {
    if (value_unit(z) <= 0.0)
      fail(ErrorCode::NotConvex, "gauge is not positive on the unit sphere");
  }
  if (convexity_margin(res) <= 0.0)
    fail(ErrorCode::NotConvex, "gauge violates the uniform convexity condition");
}

double AnisotropyGauge::value_unit(const Vector& z) const {
  switch (family_) {
    case Family::Isotropic:
      return 1.0;
    case Family::Ellipsoidal:
      return std::sqrt(z.dot(metric_ * z));
    case Family::Capillary:
      return 1.0 - std::cos(angle_) * z.dot(axis_);
    case Family::Perturbed: {
      double v = 0.0;
      switch (base_family_) {
        case Family::Isotropic: v = 1.0; break;
        case Family::Ellipsoidal: v = std::sqrt(z.dot(metric_ * z)); break;
        case Family::Capillary: v = 1.0 - std::cos(angle_) * z.dot(axis_); break;
        default: break;
      }
      for (const auto& term : terms_)
        v += term.amplitude * legendre(term.degree, z.dot(term.axis)).p;
      return v;
    }
  }
  return 1.0;
}

double AnisotropyGauge::operator()(const Vector& xi) const {
  require_nonzero(xi);
  const double r = xi.norm();
  return r * value_unit(xi / r);  // exactly one-homogeneous by construction
}

Vector AnisotropyGauge::analytic_gradient(const Vector& xi) const {
  const double r = xi.norm();
  const Vector z = xi / r;
  switch (family_) {
    case Family::Isotropic:
      return z;
    case Family::Ellipsoidal:
      return metric_ * xi / std::sqrt(xi.dot(metric_ * xi));
    case Family::Capillary:
      return z - std::cos(angle_) * axis_;
    case Family::Perturbed: {
      Vector g(dimension_);
      switch (base_family_) {
        case Family::Isotropic: g = z; break;
        case Family::Ellipsoidal: g = metric_ * xi / std::sqrt(xi.dot(metric_ * xi)); break;
        case Family::Capillary: g = z - std::cos(angle_) * axis_; break;
        default: g = z; break;
      }
      for (const auto& term : terms_) {
        const double t = z.dot(term.axis);
        const Legendre leg = legendre(term.degree, t);
        g += term.amplitude * (leg.p * z + leg.dp * (term.axis - t * z));
      }
      return g;
    }
  }
  return z;
}

Matrix AnisotropyGauge::analytic_hessian(const Vector& xi) const {
  const int d = dimension_;
  const double r = xi.norm();
  const Vector z = xi / r;
  const Matrix tangential = (Matrix::Identity(d, d) - z * z.transpose()) / r;
  switch (family_) {
    case Family::Isotropic:
      return tangential;
    case Family::Ellipsoidal: {
      const double f = std::sqrt(xi.dot(metric_ * xi));
      const Vector m = metric_ * xi;
      return metric_ / f - m * m.transpose() / (f * f * f);
    }
    case Family::Capillary:
      return tangential;
    case Family::Perturbed: {
      Matrix h(d, d);
      switch (base_family_) {
        case Family::Ellipsoidal: {
          const double f = std::sqrt(xi.dot(metric_ * xi));
          const Vector m = metric_ * xi;
          h = metric_ / f - m * m.transpose() / (f * f * f);
          break;
        }
        default:
          h = tangential;
          break;
      }
      for (const auto& term : terms_) {
        const double t = z.dot(term.axis);
        const Legendre leg = legendre(term.degree, t);
        const Vector w = term.axis - t * z;
        h += term.amplitude / r *
             ((leg.p - t * leg.dp) * (Matrix::Identity(d, d) - z * z.transpose()) +
              leg.ddp * w * w.transpose());
      }
      return h;
    }
  }
  return tangential;
}

Vector AnisotropyGauge::fd_gradient(const Vector& z) const {
  // Central differences of the value along great circles through z; the
  // radial part of the gradient equals F(z) by Euler's identity.
  const TangentFrame frame = TangentFrame::at(z);
  const double h = fd_step_;
  Vector g = value_unit(z) * z;
  for (int i = 0; i < dimension_ - 1; ++i) {
    const Vector t = frame.basis.col(i);
    const double fp = value_unit((std::cos(h) * z + std::sin(h) * t).normalized());
    const double fm = value_unit((std::cos(h) * z - std::sin(h) * t).normalized());
    g += (fp - fm) / (2.0 * h) * t;
  }
  return g;
}

Matrix AnisotropyGauge::fd_form(const TangentFrame& frame) const {
  // Five-point second-derivative stencils along great-circle restrictions;
  // in an orthonormal tangent frame the form equals g''(0) + F on the
  // diagonal, with off-diagonal entries recovered from mixed directions.
  const Vector& z = frame.base;
  const int n = dimension_ - 1;
  const double h = fd_step_;
  const double f0 = value_unit(z);
  const auto circle_dd = [&](const Vector& t) {
    const auto at = [&](double s) {
      return value_unit((std::cos(s) * z + std::sin(s) * t).normalized());
    };
    return (-at(2 * h) + 16.0 * at(h) - 30.0 * f0 + 16.0 * at(-h) - at(-2 * h)) /
           (12.0 * h * h);
  };
  Matrix form(n, n);
  for (int i = 0; i < n; ++i) form(i, i) = circle_dd(frame.basis.col(i)) + f0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vector e = ((frame.basis.col(i) + frame.basis.col(j)) / std::sqrt(2.0));
      const double aee = circle_dd(e) + f0;
      form(i, j) = form(j, i) = aee - 0.5 * (form(i, i) + form(j, j));
    }
  }
  return form;
}

Vector AnisotropyGauge::gradient(const Vector& xi) const {
  require_nonzero(xi);
  if (analytic_) return analytic_gradient(xi);
  return fd_gradient(xi / xi.norm());  // 0-homogeneous
}

Matrix AnisotropyGauge::hessian(const Vector& xi) const {
  require_nonzero(xi);
  const double r = xi.norm();
  if (analytic_) return analytic_hessian(xi);
  // Reconstruct from the tangential block: the Hessian of a one-homogeneous
  // function annihilates the radial direction.
  const Vector z = xi / r;
  const TangentFrame frame = TangentFrame::at(z);
  return frame.basis * fd_form(frame) * frame.basis.transpose() / r;
}

Vector AnisotropyGauge::cahn_hoffman(const Vector& z) const {
  if (std::abs(z.norm() - 1.0) > 1e-10)
    fail(ErrorCode::NonUnitInput, "Cahn-Hoffman map requires a unit vector");
  return gradient(z);
}

Matrix AnisotropyGauge::anisotropy_form(const TangentFrame& frame) const {
  if (!analytic_) return fd_form(frame);
  // The form equals the tangential block of the Euclidean Hessian at z.
  return frame.basis.transpose() * analytic_hessian(frame.base) * frame.basis;
}

double AnisotropyGauge::convexity_margin(int grid_resolution) const {
  if (grid_resolution < 8) fail(ErrorCode::InvalidArgument, "grid resolution must be >= 8");
  const int count = dimension_ == 2 ? grid_resolution : grid_resolution * grid_resolution;
  const auto min_eig = [&](const Vector& z) {
    const Matrix form = anisotropy_form(TangentFrame::at(z));
    if (form.rows() == 1) return form(0, 0);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(form);
    return eig.eigenvalues().minCoeff();
  };
  double best = std::numeric_limits<double>::infinity();
  Vector argmin;
  for (const Vector& z : quasi_uniform_directions(dimension_, count)) {
    const double m = min_eig(z);
    if (m < best) {
      best = m;
      argmin = z;
    }
  }
  // Local pattern-search refinement around the grid minimizer.
  double step = dimension_ == 2 ? (2.0 * kPi / count) : std::sqrt(4.0 * kPi / count);
  for (int iter = 0; iter < 25; ++iter) {
    const TangentFrame frame = TangentFrame::at(argmin);
    bool moved = false;
    for (int i = 0; i < dimension_ - 1; ++i) {
      for (const double s : {step, -step}) {
        const Vector cand =
            (std::cos(s) * argmin + std::sin(s) * frame.basis.col(i)).normalized();
        const double m = min_eig(cand);
        if (m < best) {
          best = m;
          argmin = cand;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
    if (step < 1e-6) break;
  }
  return best;
}

double AnisotropyGauge::dual(const Vector& x) const {
  require_nonzero(x);
  switch (family_) {
    case Family::Isotropic:
      return x.norm();
    case Family::Ellipsoidal:
      return std::sqrt(x.dot(metric_inv_ * x));
    case Family::Capillary: {
      // The unit dual ball is a Euclidean ball centered at c = -cos(theta) e;
      // solving |x - lambda c| = lambda gives the gauge of that ball.
      const Vector c = -std::cos(angle_) * axis_;
      const double cc = 1.0 - c.squaredNorm();
      const double xc = x.dot(c);
      return (-xc + std::sqrt(xc * xc + cc * x.squaredNorm())) / cc;
    }
    case Family::Perturbed:
      return dual_numeric(x);
  }
  return x.norm();
}

double AnisotropyGauge::dual_numeric(const Vector& x) const {
  require_nonzero(x);
  const double r = x.norm();
  const Vector xh = x / r;
  const auto objective = [&](const Vector& z) { return xh.dot(z) / value_unit(z); };

  const auto riemannian_grad = [&](const Vector& z) {
    const double F = value_unit(z);
    Vector grad = xh / F - (xh.dot(z) / (F * F)) * gradient(z);
    grad -= grad.dot(z) * z;
    return grad;
  };

  bool converged = false;
  double best = -std::numeric_limits<double>::infinity();
  for (const Vector& start : quasi_uniform_directions(dimension_, 32)) {
    Vector z = start;
    double fz = objective(z);
    double alpha = 1.0;
    bool ok = false;
    for (int iter = 0; iter < 200 && !ok; ++iter) {
      const Vector grad = riemannian_grad(z);
      const double gn = grad.norm();
      if (gn < 1e-10) {
        ok = true;
        break;
      }
      alpha = std::min(alpha * 2.0, 1e3);  // warm-started backtracking
      bool stepped = false;
      while (alpha * gn >= 1e-12) {
        const Vector cand = (z + alpha * grad).normalized();
        const double fc = objective(cand);
        if (fc >= fz + 1e-4 * alpha * gn * gn) {
          z = cand;
          fz = fc;
          stepped = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!stepped) ok = true;  // step fell below 1e-12
      if (gn < 1e-5) break;     // hand over to the Newton polish
    }
    // Newton polish in a tangent chart; gradient ascent alone crawls near
    // flat maxima and cannot reach the gradient stopping tolerance.
    for (int iter = 0; iter < 20 && !ok; ++iter) {
      const TangentFrame frame = TangentFrame::at(z);
      const int n = dimension_ - 1;
      const auto chart_grad = [&](const Vector& s) {
        const Vector zs = (z + frame.basis * s).normalized();
        return Vector(frame.basis.transpose() * riemannian_grad(zs) /
                      (z + frame.basis * s).norm());
      };
      const Vector g0 = frame.basis.transpose() * riemannian_grad(z);
      if (g0.norm() < 1e-10) {
        ok = true;
        break;
      }
      const double h = 1e-6;
      Matrix hess(n, n);
      for (int i = 0; i < n; ++i) {
        Vector e = Vector::Zero(n);
        e[i] = h;
        hess.col(i) = (chart_grad(e) - chart_grad(-e)) / (2.0 * h);
      }
      hess = 0.5 * (hess + hess.transpose());
      const Vector step = hess.fullPivLu().solve(-g0);
      if (!step.allFinite() || step.norm() > 0.5) break;
      const Vector cand = (z + frame.basis * step).normalized();
      const double fc = objective(cand);
      if (fc < fz - 1e-12) break;
      z = cand;
      fz = std::max(fz, fc);
      if (step.norm() < 1e-12) {
        ok = true;
        break;
      }
    }
    converged = converged || ok;
    best = std::max(best, fz);
  }
  if (!converged)
    fail(ErrorCode::ConvergenceFailure, "dual gauge ascent stalled on every start");
  return r * best;
}

double geodesic_support_check(const AnisotropyGauge& gauge, const Vector& x,
                              const Vector& y, const Vector& z) {
  for (const Vector* v : {&x, &y, &z}) {
    if (std::abs(v->norm() - 1.0) > 1e-10)
      fail(ErrorCode::NonUnitInput, "geodesic support check requires unit vectors");
  }
  const int d = gauge.dimension();
  if (d == 3) {
    Eigen::Vector3d a(x[0], x[1], x[2]), b(y[0], y[1], y[2]), c(z[0], z[1], z[2]);
    if (std::abs(a.cross(b).dot(c)) > 1e-8)
      fail(ErrorCode::NotOnGeodesic, "triple is not coplanar");
  }
  const double dxz = angle_between(x, z);
  const double dxy = angle_between(x, y);
  const double dyz = angle_between(y, z);
  if (std::abs(dxy + dyz - dxz) > 1e-8)
    fail(ErrorCode::NotOnGeodesic, "point does not lie between the endpoints");
  return gauge.cahn_hoffman(y).dot(z) - gauge.cahn_hoffman(x).dot(z);
}

}  // namespace wulffkit
