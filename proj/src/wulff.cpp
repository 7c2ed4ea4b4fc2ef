#include "wulffkit/wulff.hpp"

#include <algorithm>
#include <cmath>

#include "wulffkit/mesh.hpp"

namespace wulffkit {

namespace {

// Chart-domain clamp for the local refinements; also answers whether the
// clamped point is pinned to the trim curve.
struct ChartDomain {
  std::function<Vector(const Vector&)> clamp;
  std::function<bool(const Vector&)> pinned;
};

ChartDomain chart_domain(const ParametrizedPatch& patch, int chart) {
  if (const auto* sphere = dynamic_cast<const SphereMappedPatch*>(&patch)) {
    if (sphere->closed()) {
      return {[](const Vector& u) { return u; }, [](const Vector&) { return false; }};
    }
    (void)chart;
    return {[sphere](const Vector& u) {
              Vector v = u;
              const double tmax = sphere->theta_max(u[1]);
              v[0] = std::clamp(v[0], 0.0, tmax);
              return v;
            },
            [sphere](const Vector& u) {
              return sphere->theta_max(u[1]) - u[0] <= 1e-7;
            }};
  }
  if (const auto* curve = dynamic_cast<const CurvePatch*>(&patch)) {
    if (curve->closed()) {
      return {[](const Vector& u) { return u; }, [](const Vector&) { return false; }};
    }
    const double lo = curve->theta_lo(), hi = curve->theta_hi();
    return {[lo, hi](const Vector& u) {
              Vector v = u;
              v[0] = std::clamp(v[0], lo, hi);
              return v;
            },
            [lo, hi](const Vector& u) {
              return u[0] - lo <= 1e-9 || hi - u[0] <= 1e-9;
            }};
  }
  fail(ErrorCode::InvalidArgument, "touch search supports sphere and curve patches only");
}

Vector patch_position(const ParametrizedPatch& patch, int chart, const Vector& u) {
  if (const auto* sphere = dynamic_cast<const SphereMappedPatch*>(&patch))
    return sphere->map().value(sphere->direction(chart, u[0], u[1]));
  if (const auto* curve = dynamic_cast<const CurvePatch*>(&patch))
    return curve->map().value(curve->direction(u[0]));
  return patch.jet(chart, u).x;
}

// Trust-region minimization of f on the (clamped) chart, 20 iterations.
Vector refine_extremum(const std::function<double(const Vector&)>& f, const ChartDomain& dom,
                       Vector u, double initial_radius) {
  const int n = static_cast<int>(u.size());
  const double h = 1e-5;
  double radius = initial_radius;
  double fu = f(u);
  for (int iter = 0; iter < 20; ++iter) {
    Vector grad(n);
    Matrix hess(n, n);
    std::vector<double> fp(n), fm(n);
    for (int i = 0; i < n; ++i) {
      Vector e = Vector::Zero(n);
      e[i] = h;
      fp[i] = f(u + e);
      fm[i] = f(u - e);
      grad[i] = (fp[i] - fm[i]) / (2.0 * h);
      hess(i, i) = (fp[i] - 2.0 * fu + fm[i]) / (h * h);
    }
    if (n == 2) {
      Vector e0 = Vector::Zero(2), e1 = Vector::Zero(2);
      e0[0] = h;
      e1[1] = h;
      hess(0, 1) = hess(1, 0) =
          (f(u + e0 + e1) - f(u + e0 - e1) - f(u - e0 + e1) + f(u - e0 - e1)) /
          (4.0 * h * h);
    }
    if (grad.norm() < 1e-11) break;

    // Levenberg step confined to the trust radius.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hess);
    double shift = std::max(0.0, 1e-10 - eig.eigenvalues().minCoeff());
    Vector step;
    for (int tries = 0; tries < 60; ++tries) {
      step = -(hess + shift * Matrix::Identity(n, n)).ldlt().solve(grad);
      if (step.norm() <= radius && step.allFinite()) break;
      shift = std::max(2.0 * shift, grad.norm() / radius);
    }
    const Vector cand = dom.clamp(u + step);
    const double fc = f(cand);
    if (fc < fu) {
      u = cand;
      fu = fc;
      radius = std::min(radius * 2.0, 4.0 * initial_radius);
    } else {
      radius *= 0.25;
    }
    if (radius < 1e-12) break;
  }
  return u;
}

// Polar charts degenerate at theta = 0; derivative evaluations there are
// moved a hair off the pole (the geometry is smooth across it).
Vector off_pole(const ParametrizedPatch& patch, Vector u) {
  if (dynamic_cast<const SphereMappedPatch*>(&patch) && std::abs(u[0]) < 1e-4) u[0] = 1e-4;
  return u;
}

// Anisotropic principal curvatures at a chart point.
Vector curvatures_at(const AnisotropyGauge& gauge, const ParametrizedPatch& patch, int chart,
                     const Vector& u) {
  const FundamentalForms forms = fundamental_forms(patch, chart, u);
  // Orthonormal frame spanning the tangent plane.
  const Matrix& J = patch.jet(chart, u).tangents;
  const int n = static_cast<int>(J.cols());
  Matrix frame(J.rows(), n);
  frame.col(0) = J.col(0).normalized();
  if (n == 2)
    frame.col(1) = (J.col(1) - J.col(1).dot(frame.col(0)) * frame.col(0)).normalized();
  const Matrix b = J.transpose() * frame;
  const Matrix metric_inv = forms.metric.inverse();
  Matrix dnu = b.transpose() * metric_inv * forms.second * metric_inv * b;
  dnu = 0.5 * (dnu + dnu.transpose());
  TangentFrame tf;
  tf.base = forms.normal;
  tf.basis = frame;
  const Matrix form = gauge.anisotropy_form(tf);
  Eigen::SelfAdjointEigenSolver<Matrix> form_eig(form);
  const Matrix sqrt_form = form_eig.operatorSqrt();
  Matrix sym = sqrt_form * dnu * sqrt_form;
  sym = 0.5 * (sym + sym.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues();
}

TouchResult touch_search(const AnisotropyGauge& gauge, const QuadraturedSurface& surface,
                         const Vector& y, const ConvexContainer* container, bool outward) {
  if (surface.samples.empty()) fail(ErrorCode::InvalidArgument, "empty surface");
  const double sign = outward ? -1.0 : 1.0;  // minimize sign * F*(x - y)

  TouchResult result;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < surface.samples.size(); ++i) {
    const double v = sign * gauge.dual(surface.samples[i].x - y);
    if (v < best - 1e-15) {
      best = v;
      result.sample_index = static_cast<int>(i);
    }
  }
  for (const auto& s : surface.samples) {
    if (std::abs(sign * gauge.dual(s.x - y) - best) <= 1e-12 * std::max(1.0, std::abs(best)))
      ++result.tie_count;
  }

  const SurfaceSample& seed = surface.samples[result.sample_index];
  const ParametrizedPatch& patch = *surface.patch;
  const ChartDomain dom = chart_domain(patch, seed.chart);
  const double initial_radius = kPi / std::max(8, surface.resolution);

  // Refine without the trim constraint first: the chart extends smoothly past
  // the trim curve, and admissible touches are interior, so the constrained
  // and unconstrained extrema usually coincide. Only a result outside the
  // domain forces the clamped search.
  const ChartDomain free_domain{[](const Vector& u) { return u; },
                                [](const Vector&) { return false; }};
  const auto free_objective = [&](const Vector& u) {
    return sign * gauge.dual(patch_position(patch, seed.chart, u) - y);
  };
  Vector u = refine_extremum(free_objective, free_domain, seed.u, initial_radius);
  if ((dom.clamp(u) - u).norm() > 1e-12) {
    const auto objective = [&](const Vector& u2) {
      return sign * gauge.dual(patch_position(patch, seed.chart, dom.clamp(u2)) - y);
    };
    u = dom.clamp(refine_extremum(objective, dom, seed.u, initial_radius));
  }

  result.point = patch_position(patch, seed.chart, u);
  result.radius = gauge.dual(result.point - y);
  if (dom.pinned(u)) {
    result.stratum = TouchResult::Stratum::BoundaryRegular;
    if (container) {
      const StratumLabel label = container->classify(result.point);
      if (label.kind == StratumLabel::Kind::Edge)
        result.stratum = TouchResult::Stratum::BoundaryEdge;
    }
  }

  const Vector kappa = curvatures_at(gauge, patch, seed.chart, off_pole(patch, u));
  result.curvature_certificate = outward ? kappa[0] : kappa[kappa.size() - 1];

  if (!outward && result.stratum == TouchResult::Stratum::Interior) {
    const FundamentalForms forms = fundamental_forms(patch, seed.chart, off_pole(patch, u));
    const Vector nu_f = gauge.cahn_hoffman(forms.normal);
    result.reconstruction_error = (y - (result.point - result.radius * nu_f)).norm();
  }
  return result;
}

}  // namespace

std::shared_ptr<ParametrizedPatch> wulff_patch(std::shared_ptr<const AnisotropyGauge> gauge,
                                               const Vector& center, double radius) {
  auto map = std::make_shared<WulffMap>(gauge, center, radius);
  if (gauge->dimension() == 3)
    return SphereMappedPatch::closed_surface(map);
  if (gauge->dimension() == 2) return CurvePatch::closed_curve(map);
  fail(ErrorCode::InvalidArgument, "Wulff patches exist for d = 2, 3");
}

std::shared_ptr<ParametrizedPatch> wulff_cap(std::shared_ptr<const AnisotropyGauge> gauge,
                                             const Vector& center, double radius,
                                             const Cutter& cutter) {
  auto map = std::make_shared<WulffMap>(gauge, center, radius);
  if (gauge->dimension() == 3) return SphereMappedPatch::cap(map, cutter);
  if (gauge->dimension() == 2) return CurvePatch::arc(map, cutter);
  fail(ErrorCode::InvalidArgument, "Wulff caps exist for d = 2, 3");
}

TouchResult inner_touch(const AnisotropyGauge& gauge, const QuadraturedSurface& surface,
                        const Vector& y, const ConvexContainer* container,
                        bool skip_inside_check) {
  if (!skip_inside_check && !surface.region_tester().contains(y))
    fail(ErrorCode::NotInside, "touch center is not inside the enclosed region");
  return touch_search(gauge, surface, y, container, /*outward=*/false);
}

TouchResult outer_touch(const AnisotropyGauge& gauge, const QuadraturedSurface& surface,
                        const Vector& origin, const ConvexContainer* container) {
  return touch_search(gauge, surface, origin, container, /*outward=*/true);
}

}  // namespace wulffkit
