#pragma once

#include "wulffkit/wulff.hpp"

namespace wulffkit {

/// Per-sample sweep extent t_max = 1 / max_i kappa_i^F of the parallel map
/// x - t nu_F(x); positive everywhere on mean-convex surfaces.
struct SweepRegion {
  const QuadraturedSurface* surface = nullptr;
  const AnisotropicShapeData* shape = nullptr;
  std::vector<double> t_max;
};

SweepRegion make_sweep_region(const QuadraturedSurface& surface,
                              const AnisotropicShapeData& shape);

/// Integral of F(nu) / H^F; throws NotMeanConvex (with the offending sample)
/// when min H^F <= 1e-8.
double hk_functional(const AnisotropyGauge& gauge, const QuadraturedSurface& surface,
                     const AnisotropicShapeData& shape);

/// Functional divided by (n+1)/n times the enclosed volume; >= 1 up to
/// quadrature error for admissible mean-convex configurations. Surfaces with
/// boundary require a container and pass through the admissibility check
/// (PreconditionFailure otherwise).
double hk_ratio(const AnisotropyGauge& gauge, const QuadraturedSurface& surface,
                const ConvexContainer* container, double admissibility_tolerance = 1e-6);

struct MinkowskiResult {
  double raw = 0.0;         // integral of n F(nu) - H^F <x, nu>
  double normalized = 0.0;  // |raw| / area
  double boundary_form = 0.0;  // boundary integral of <mu_F, x>
};

/// Both routes to the Minkowski-type integral: the surface divergence of
/// F(nu) x - <x, nu> nu_F, and its boundary form. They agree up to quadrature
/// error; both vanish for anisotropic free boundary hypersurfaces in cones
/// with vertex at the origin.
MinkowskiResult minkowski_residual(const AnisotropyGauge& gauge,
                                   const QuadraturedSurface& surface,
                                   const AnisotropicShapeData& shape,
                                   const BoundaryTrace* trace);

/// x - t nu_F(x) at a sample.
Vector parallel_map(const QuadraturedSurface& surface, const AnisotropicShapeData& shape,
                    int sample_index, double t);

/// Volume swept by the parallel map over the region 0 < t <= t_max(x):
/// the t-integral of F(nu) prod_i (1 - t kappa_i^F) is a polynomial and is
/// integrated in closed form.
double sweep_volume(const SweepRegion& region);

struct CoverageWitness {
  int index = -1;
  Vector point;
  double touch_radius = 0.0;
  double t_max = 0.0;
  TouchResult::Stratum stratum = TouchResult::Stratum::Interior;
};

struct CoverageResult {
  double fraction = 0.0;
  int requested = 0;
  std::uint64_t seed = 0;
  std::vector<CoverageWitness> witnesses;
};

/// Draws seeded uniform points in the enclosed region (rejection against the
/// parity tester and the container) and checks that each is reached by the
/// parallel sweep: the inner touch must be interior with touch radius at most
/// t_max at the touch point. Witnesses list the failures; the fraction is
/// expected to be exactly 1.
CoverageResult coverage_check(const AnisotropyGauge& gauge, const QuadraturedSurface& surface,
                              const ConvexContainer* container, int n_samples,
                              std::uint64_t seed, int threads = 1);

struct EqualityDiagnosis {
  bool flagged = false;
  double ratio = 0.0;
  double epsilon = 5e-3;
  double umbilicity_residual = 0.0;  // max |kappa_i^F - H^F / n|
  Vector center_estimate;            // mean of x - (n / H^F) nu_F
  double wulff_residual = 0.0;       // max |F*(x - center) - n / H^F|
  std::string boundary_contact;      // closed | flat | cone | wedge | mixed
  bool center_on_singular_set = false;
  bool wetted_cone_consistent = false;
};

/// Rigidity diagnostics for a computed ratio: near-equality flag (ratio <=
/// 1 + epsilon), umbilicity and Wulff-shape residuals around the recovered
/// center, and the classification of the wetted container portion.
EqualityDiagnosis equality_diagnosis(const AnisotropyGauge& gauge,
                                     const QuadraturedSurface& surface,
                                     const ConvexContainer* container, double ratio,
                                     double epsilon = 5e-3);

}  // namespace wulffkit
