#include "wulffkit/hk.hpp"

#include <algorithm>
#include <cmath>

#include "wulffkit/mesh.hpp"

namespace wulffkit {

namespace {

void require_mean_convex(const AnisotropicShapeData& shape) {
  if (shape.min_mean_curvature <= 1e-8)
    fail(ErrorCode::NotMeanConvex,
         "anisotropic mean curvature " + std::to_string(shape.min_mean_curvature) +
             " at sample " + std::to_string(shape.argmin_mean_curvature));
}

}  // namespace

SweepRegion make_sweep_region(const QuadraturedSurface& surface,
                              const AnisotropicShapeData& shape) {
  SweepRegion region;
  region.surface = &surface;
  region.shape = &shape;
  region.t_max.resize(shape.samples.size());
  for (std::size_t i = 0; i < shape.samples.size(); ++i) {
    const Vector& kappa = shape.samples[i].curvatures;
    const double kmax = kappa[kappa.size() - 1];
    if (!(kmax > 0.0))
      fail(ErrorCode::NotMeanConvex,
           "largest anisotropic curvature is nonpositive at sample " + std::to_string(i));
    region.t_max[i] = 1.0 / kmax;
  }
  return region;
}

double hk_functional(const AnisotropyGauge&, const QuadraturedSurface& surface,
                     const AnisotropicShapeData& shape) {
  require_mean_convex(shape);
  std::vector<double> terms(surface.samples.size());
  for (std::size_t i = 0; i < surface.samples.size(); ++i)
    terms[i] = surface.samples[i].weight * shape.samples[i].F_nu /
               shape.samples[i].mean_curvature;
  return pairwise_sum(terms);
}

double hk_ratio(const AnisotropyGauge& gauge, const QuadraturedSurface& surface,
                const ConvexContainer* container, double admissibility_tolerance) {
  const AnisotropicShapeData shape = anisotropic_shape(gauge, surface);
  require_mean_convex(shape);
  if (!surface.patch->closed()) {
    if (!container)
      fail(ErrorCode::PreconditionFailure,
           "surfaces with boundary need a container for the ratio");
    const BoundaryTrace trace =
        boundary_trace(*surface.patch, gauge, surface.resolution);
    const AdmissibilityReport report = admissibility_report(gauge, trace, *container);
    if (!report.admissible(admissibility_tolerance))
      fail(ErrorCode::PreconditionFailure,
           "boundary contact violates the admissibility condition: max <nu_F, N> = " +
               std::to_string(report.max_anisotropic_normal_product));
  }
  const double volume =
      container ? enclosed_volume(surface, *container) : enclosed_volume(surface);
  const int n = surface.dimension() - 1;
  return hk_functional(gauge, surface, shape) /
         ((static_cast<double>(n + 1) / n) * volume);
}

MinkowskiResult minkowski_residual(const AnisotropyGauge&,
                                   const QuadraturedSurface& surface,
                                   const AnisotropicShapeData& shape,
                                   const BoundaryTrace* trace) {
  MinkowskiResult result;
  const int n = surface.dimension() - 1;
  std::vector<double> terms(surface.samples.size());
  for (std::size_t i = 0; i < surface.samples.size(); ++i) {
    const SurfaceSample& s = surface.samples[i];
    terms[i] = s.weight * (n * shape.samples[i].F_nu -
                           shape.samples[i].mean_curvature * s.x.dot(s.normal));
  }
  result.raw = pairwise_sum(terms);
  result.normalized = std::abs(result.raw) / surface.area();
  if (trace) {
    std::vector<double> boundary_terms(trace->samples.size());
    for (std::size_t i = 0; i < trace->samples.size(); ++i)
      boundary_terms[i] = trace->samples[i].weight * trace->samples[i].mu_F.dot(trace->samples[i].x);
    result.boundary_form = pairwise_sum(boundary_terms);
  }
  return result;
}

Vector parallel_map(const QuadraturedSurface& surface, const AnisotropicShapeData& shape,
                    int sample_index, double t) {
  if (sample_index < 0 || sample_index >= static_cast<int>(surface.samples.size()))
    fail(ErrorCode::InvalidArgument, "sample index out of range");
  if (t < 0.0) fail(ErrorCode::InvalidArgument, "parallel map requires t >= 0");
  return surface.samples[sample_index].x - t * shape.samples[sample_index].nu_F;
}

double sweep_volume(const SweepRegion& region) {
  const QuadraturedSurface& surface = *region.surface;
  const AnisotropicShapeData& shape = *region.shape;
  const int n = surface.dimension() - 1;
  std::vector<double> terms(surface.samples.size());
  for (std::size_t i = 0; i < surface.samples.size(); ++i) {
    // Coefficients of prod_k (1 - t kappa_k) in powers of t.
    std::vector<double> coeff(n + 1, 0.0);
    coeff[0] = 1.0;
    for (int k = 0; k < n; ++k) {
      const double kappa = shape.samples[i].curvatures[k];
      for (int j = k + 1; j >= 1; --j) coeff[j] -= kappa * coeff[j - 1];
    }
    const double tmax = region.t_max[i];
    double integral = 0.0;
    double power = tmax;
    for (int j = 0; j <= n; ++j) {
      integral += coeff[j] * power / (j + 1);
      power *= tmax;
    }
    terms[i] = surface.samples[i].weight * shape.samples[i].F_nu * integral;
  }
  return pairwise_sum(terms);
}

CoverageResult coverage_check(const AnisotropyGauge& gauge, const QuadraturedSurface& surface,
                              const ConvexContainer* container, int n_samples,
                              std::uint64_t seed, int threads) {
  if (n_samples < 1) fail(ErrorCode::InvalidArgument, "coverage needs n_samples >= 1");
  const AnisotropicShapeData shape = anisotropic_shape(gauge, surface);
  require_mean_convex(shape);
  if (!surface.patch->closed()) {
    if (!container)
      fail(ErrorCode::PreconditionFailure, "coverage of a capped surface needs a container");
    const BoundaryTrace trace = boundary_trace(*surface.patch, gauge, surface.resolution);
    const AdmissibilityReport report = admissibility_report(gauge, trace, *container);
    if (!report.admissible(1e-6))
      fail(ErrorCode::PreconditionFailure,
           "coverage requires an admissible boundary configuration");
  }

  const RegionTester& tester = surface.region_tester();
  const Vector lo = tester.box_min();
  const Vector hi = tester.box_max();
  const int d = surface.dimension();

  // Seeded rejection sampling; candidate generation is sequential so the
  // accepted set depends only on the seed.
  Rng rng(seed);
  std::vector<Vector> points;
  points.reserve(n_samples);
  long attempts = 0;
  const long cap = 100L * n_samples;
  while (static_cast<int>(points.size()) < n_samples) {
    if (++attempts > cap)
      fail(ErrorCode::SamplingFailure, "rejection sampling exceeded the 100x attempt cap");
    Vector y(d);
    for (int k = 0; k < d; ++k) y[k] = rng.uniform(lo[k], hi[k]);
    if (container && container->classify(y).kind != StratumLabel::Kind::Interior) continue;
    if (!tester.contains(y)) continue;
    points.push_back(y);
  }

  CoverageResult result;
  result.requested = n_samples;
  result.seed = seed;
  const double scale = (hi - lo).norm();
  std::vector<std::optional<CoverageWitness>> flags(points.size());
  parallel_for(static_cast<int>(points.size()), threads, [&](int i) {
    const TouchResult touch =
        inner_touch(gauge, surface, points[i], container, /*skip_inside_check=*/true);
    const double tmax = 1.0 / touch.curvature_certificate;
    const bool ok = touch.stratum == TouchResult::Stratum::Interior &&
                    touch.curvature_certificate > 0.0 &&
                    touch.radius <= tmax + 1e-6 * scale;
    if (!ok) {
      CoverageWitness w;
      w.index = i;
      w.point = points[i];
      w.touch_radius = touch.radius;
      w.t_max = touch.curvature_certificate > 0.0 ? tmax : 0.0;
      w.stratum = touch.stratum;
      flags[i] = w;
    }
  });
  for (auto& f : flags)
    if (f) result.witnesses.push_back(*f);
  result.fraction =
      static_cast<double>(n_samples - static_cast<int>(result.witnesses.size())) / n_samples;
  return result;
}

EqualityDiagnosis equality_diagnosis(const AnisotropyGauge& gauge,
                                     const QuadraturedSurface& surface,
                                     const ConvexContainer* container, double ratio,
                                     double epsilon) {
  EqualityDiagnosis diag;
  diag.ratio = ratio;
  diag.epsilon = epsilon;
  diag.flagged = ratio <= 1.0 + epsilon;

  const AnisotropicShapeData shape = anisotropic_shape(gauge, surface);
  require_mean_convex(shape);
  const int d = surface.dimension();
  const int n = d - 1;

  double umbilicity = 0.0;
  std::vector<Vector> centers(surface.samples.size());
  std::vector<double> weights(surface.samples.size());
  for (std::size_t i = 0; i < surface.samples.size(); ++i) {
    const auto& ss = shape.samples[i];
    for (int k = 0; k < n; ++k)
      umbilicity = std::max(umbilicity,
                            std::abs(ss.curvatures[k] - ss.mean_curvature / n));
    centers[i] = surface.samples[i].weight *
                 (surface.samples[i].x - (n / ss.mean_curvature) * ss.nu_F);
    weights[i] = surface.samples[i].weight;
  }
  diag.umbilicity_residual = umbilicity;
  diag.center_estimate = pairwise_sum(centers, d) / pairwise_sum(weights);

  double wulff_residual = 0.0;
  for (std::size_t i = 0; i < surface.samples.size(); ++i) {
    const double expected = n / shape.samples[i].mean_curvature;
    wulff_residual = std::max(
        wulff_residual,
        std::abs(gauge.dual(surface.samples[i].x - diag.center_estimate) - expected));
  }
  diag.wulff_residual = wulff_residual;

  if (surface.patch->closed()) {
    diag.boundary_contact = "closed";
    return diag;
  }
  if (!container) {
    diag.boundary_contact = "mixed";
    return diag;
  }

  const BoundaryTrace trace = boundary_trace(*surface.patch, gauge, surface.resolution);
  std::vector<Vector> facet_normals;
  bool edge_contact = false;
  bool off_boundary = false;
  for (const auto& s : trace.samples) {
    const StratumLabel label = container->classify(s.x);
    if (label.kind == StratumLabel::Kind::Edge) {
      edge_contact = true;
    } else if (label.kind == StratumLabel::Kind::Regular) {
      bool known = false;
      for (const auto& m : facet_normals)
        if (m.dot(label.normal) > 1.0 - 1e-8) known = true;
      if (!known) facet_normals.push_back(label.normal);
    } else {
      off_boundary = true;
    }
  }
  const bool curved_wall = (container->kind() == ConvexContainer::Kind::CircularCone &&
                            container->facets().empty()) ||
                           container->kind() == ConvexContainer::Kind::Ball;
  if (off_boundary) {
    diag.boundary_contact = "mixed";
  } else if (edge_contact) {
    diag.boundary_contact = "wedge";
  } else if (curved_wall) {
    diag.boundary_contact = "cone";
  } else if (facet_normals.size() >= 2) {
    diag.boundary_contact = "wedge";
  } else {
    diag.boundary_contact = "flat";
  }

  if (const auto dist = container->singular_set_distance(diag.center_estimate))
    diag.center_on_singular_set = *dist <= 1e-3 * std::max(1.0, container->scale());

  // The wetted portion is consistent with a cone over the trim curve when the
  // rays from the recovered center through boundary points stay on the wall.
  bool consistent = true;
  const std::size_t stride = std::max<std::size_t>(1, trace.samples.size() / 64);
  for (std::size_t i = 0; i < trace.samples.size(); i += stride) {
    for (const double s : {0.5, 1.5}) {
      const Vector probe =
          diag.center_estimate + s * (trace.samples[i].x - diag.center_estimate);
      const StratumLabel label = container->classify(probe);
      if (label.kind != StratumLabel::Kind::Regular &&
          label.kind != StratumLabel::Kind::Edge) {
        consistent = false;
        break;
      }
    }
    if (!consistent) break;
  }
  diag.wetted_cone_consistent = consistent;
  return diag;
}

}  // namespace wulffkit
