// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run through ctest as the "acceptance" test or directly:
//
//   ./wulffkit_acceptance [scenario_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "wulffkit/hk.hpp"
#include "wulffkit/oracle2d.hpp"
#include "wulffkit/scenario.hpp"

using namespace wulffkit;

namespace {

int failures = 0;

void line(int criterion, bool pass, const std::string& text) {
  std::printf("%-4s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, text.c_str());
  if (!pass) ++failures;
}

std::string num(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3e", v);
  return buffer;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

std::shared_ptr<const AnisotropyGauge> shared_gauge(AnisotropyGauge g) {
  return std::make_shared<AnisotropyGauge>(std::move(g));
}

std::vector<AnisotropyGauge> builtin_gauges() {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) = 4.0;
  std::vector<PerturbationTerm> terms;
  terms.push_back({3, vec3(0, 0, 1), 0.08});
  terms.push_back({2, vec3(1, 0, 0), -0.05});
  return {AnisotropyGauge::isotropic(3), AnisotropyGauge::ellipsoidal(m),
          AnisotropyGauge::capillary(kPi / 3, vec3(0, 0, 1)),
          AnisotropyGauge::perturbed(AnisotropyGauge::isotropic(3), terms)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string scenario_dir = argc > 1 ? argv[1] : WULFFKIT_SCENARIO_DIR;
  const auto scenario_path = [&](const std::string& name) {
    return scenario_dir + "/" + name + ".json";
  };

  // Run the positive scenarios once and keep their reports and wall times.
  std::map<std::string, RunOutcome> runs;
  std::map<std::string, double> seconds;
  for (const std::string name :
       {"sphere", "hemisphere", "cone_cap", "ellipsoid_cap", "ellipsoid_cone_cap",
        "perturbed", "capillary_cap", "wedge_hemisphere", "d2_circle", "d2_quarter"}) {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario sc = load_scenario(scenario_path(name));
    runs[name] = run_scenario(sc);
    seconds[name] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  // 1. Closed equality case: unit sphere at resolution 64.
  {
    const VerificationReport& r = runs["sphere"].report;
    const bool ratio_ok = r.hk_ratio && std::abs(*r.hk_ratio - 1.0) <= 1e-3;
    const bool time_ok = seconds["sphere"] < 5.0;
    line(1, ratio_ok && time_ok,
         "unit sphere: |ratio - 1| = " + num(r.hk_ratio ? std::abs(*r.hk_ratio - 1.0) : 1.0) +
             " <= 1e-3, runtime " + num(seconds["sphere"]) + "s < 5s");
  }

  // 2. Free boundary in the half-space: hemisphere.
  {
    const VerificationReport& r = runs["hemisphere"].report;
    const bool ok = r.hk_ratio && std::abs(*r.hk_ratio - 1.0) <= 1e-3 && r.admissibility &&
                    r.admissibility->free_boundary_residual <= 1e-8;
    line(2, ok,
         "hemisphere: |ratio - 1| = " + num(std::abs(*r.hk_ratio - 1.0)) +
             ", boundary residual = " + num(r.admissibility->free_boundary_residual) +
             " <= 1e-8");
  }

  // 3. Cone rigidity: radial cap in the pi/3 cone.
  {
    const VerificationReport& r = runs["cone_cap"].report;
    const bool volume_ok = r.volume && std::abs(*r.volume - kPi / 3) <= 1e-3 * (kPi / 3);
    const bool ratio_ok = r.hk_ratio && std::abs(*r.hk_ratio - 1.0) <= 1e-3;
    const bool minkowski_ok = r.minkowski_residual && *r.minkowski_residual <= 1e-4;
    const bool equality_ok = r.equality && r.equality->flagged &&
                             r.equality->center_estimate.norm() <= 1e-3;
    line(3, volume_ok && ratio_ok && minkowski_ok && equality_ok,
         "cone cap: |ratio - 1| = " + num(std::abs(*r.hk_ratio - 1.0)) +
             ", minkowski = " + num(*r.minkowski_residual) +
             ", |center - vertex| = " + num(r.equality->center_estimate.norm()));
  }

  // 4. Anisotropic rigidity: ellipsoidal Wulff cap cut through its center.
  {
    const VerificationReport& r = runs["ellipsoid_cap"].report;
    const bool adm_ok =
        r.admissibility && r.admissibility->free_boundary_residual <= 1e-6;
    const bool ratio_ok = r.hk_ratio && std::abs(*r.hk_ratio - 1.0) <= 2e-3;
    const Scenario sc = load_scenario(scenario_path("ellipsoid_cap"));
    const QuadraturedSurface surface = sample(sc.patch, 64);
    const AnisotropicShapeData shape = anisotropic_shape(*sc.gauge, surface);
    double kappa_err = 0.0;
    for (const auto& s : shape.samples)
      for (int k = 0; k < s.curvatures.size(); ++k)
        kappa_err = std::max(kappa_err, std::abs(s.curvatures[k] - 1.0));
    line(4, adm_ok && ratio_ok && kappa_err <= 5e-4,
         "ellipsoid cap: boundary residual = " +
             num(r.admissibility->free_boundary_residual) +
             ", |ratio - 1| = " + num(std::abs(*r.hk_ratio - 1.0)) +
             ", max |kappa - 1/r| = " + num(kappa_err) + " <= 5e-4");
  }

  // 5. Strictness of the inequality on the Legendre-perturbed sphere.
  {
    const VerificationReport& r = runs["perturbed"].report;
    const bool ok =
        r.hk_ratio && *r.hk_ratio >= 1.001 && r.equality && !r.equality->flagged;
    line(5, ok,
         "perturbed sphere: ratio = " + num(*r.hk_ratio) + " >= 1.001, equality " +
             (r.equality->flagged ? "flagged" : "not flagged"));
  }

  // 6. Capillary-gauge reduction: theta-cap is anisotropic free boundary and
  //    the anisotropic mean curvature equals the classical one.
  {
    const VerificationReport& r = runs["capillary_cap"].report;
    const bool residual_ok =
        r.admissibility && r.admissibility->free_boundary_residual <= 1e-6;
    const Scenario sc = load_scenario(scenario_path("capillary_cap"));
    const QuadraturedSurface surface = sample(sc.patch, 64);
    const AnisotropicShapeData aniso = anisotropic_shape(*sc.gauge, surface);
    const AnisotropicShapeData classical =
        anisotropic_shape(AnisotropyGauge::isotropic(3), surface);
    double h_gap = 0.0;
    for (std::size_t i = 0; i < aniso.samples.size(); ++i)
      h_gap = std::max(h_gap, std::abs(aniso.samples[i].mean_curvature -
                                       classical.samples[i].mean_curvature));
    line(6, residual_ok && h_gap <= 1e-10,
         "capillary cap: boundary residual = " +
             num(r.admissibility->free_boundary_residual) +
             ", max |H^F - H| = " + num(h_gap) + " <= 1e-10");
  }

  // 7. Chain inequality on every suite scenario; parallel sweep of closed
  //    Wulff shapes reproduces the enclosed volume.
  {
    bool ok = true;
    std::string detail;
    for (const auto& [name, outcome] : runs) {
      const VerificationReport& r = outcome.report;
      if (!r.volume || !r.sweep_volume || !r.hk_functional) continue;
      const int n = r.dimension - 1;
      const bool chain =
          *r.volume <= *r.sweep_volume * (1.0 + 1e-3) &&
          *r.sweep_volume <= (static_cast<double>(n) / (n + 1)) * *r.hk_functional *
                                 (1.0 + 1e-3);
      if (!chain) {
        ok = false;
        detail += " " + name;
      }
    }
    for (const std::string name : {"sphere", "d2_circle"}) {
      const VerificationReport& r = runs[name].report;
      if (std::abs(*r.sweep_volume - *r.volume) > 1e-4 * *r.volume) {
        ok = false;
        detail += " " + name + "(sweep)";
      }
    }
    // Closed anisotropic Wulff shapes, swept directly.
    Matrix m = Matrix::Identity(3, 3);
    m(0, 0) = 4.0;
    for (auto gauge : {shared_gauge(AnisotropyGauge::ellipsoidal(m)),
                       shared_gauge(AnisotropyGauge::capillary(kPi / 3, vec3(0, 0, 1)))}) {
      const QuadraturedSurface wulff = sample(wulff_patch(gauge, Vector::Zero(3), 1.0), 48);
      const AnisotropicShapeData shape = anisotropic_shape(*gauge, wulff);
      const double swept = sweep_volume(make_sweep_region(wulff, shape));
      const double volume = enclosed_volume(wulff);
      if (std::abs(swept - volume) > 1e-4 * volume) {
        ok = false;
        detail += " wulff-closed";
      }
    }
    line(7, ok, "chain inequality and closed-shape sweep volumes" +
                    (detail.empty() ? std::string(" hold on all scenarios")
                                    : " FAIL:" + detail));
  }

  // 8. Coverage of the parallel sweep on the four rigidity scenarios.
  {
    bool ok = true;
    std::string detail;
    for (const std::string name : {"sphere", "hemisphere", "cone_cap", "ellipsoid_cap"}) {
      const VerificationReport& r = runs[name].report;
      if (!r.coverage_fraction || *r.coverage_fraction != 1.0 ||
          (r.coverage_witnesses && *r.coverage_witnesses != 0)) {
        ok = false;
        detail += " " + name;
      }
    }
    line(8, ok, ok ? "coverage fraction 1.0 with zero witnesses on scenarios 1-4"
                   : "coverage failed on:" + detail);
  }

  // 9. Monotonicity of the support function along geodesics.
  {
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& gauge : builtin_gauges()) {
      Rng rng(0xacce97ull);
      for (int i = 0; i < 10000; ++i) {
        Vector x = rng.unit_vector(3);
        Vector z = rng.unit_vector(3);
        double gap = angle_between(x, z);
        while (gap < 1e-3 || gap > kPi - 0.05) {
          z = rng.unit_vector(3);
          gap = angle_between(x, z);
        }
        const double s = rng.uniform(0.0, 1.0) * gap;
        const Vector t = (z - z.dot(x) * x).normalized();
        const Vector y = std::cos(s) * x + std::sin(s) * t;
        min_margin = std::min(min_margin, geodesic_support_check(gauge, x, y, z));
      }
    }
    line(9, min_margin >= -1e-9,
         "geodesic support monotonicity: min margin = " + num(min_margin) + " >= -1e-9");
  }

  // 10. Dual-gauge identities per gauge family.
  {
    double worst_dual = 0.0;
    double worst_cs = -std::numeric_limits<double>::infinity();
    for (const auto& gauge : builtin_gauges()) {
      Rng rng(0xacce98ull);
      for (int i = 0; i < 10000; ++i) {
        const Vector z = rng.unit_vector(3);
        worst_dual = std::max(worst_dual, std::abs(gauge.dual(gauge.cahn_hoffman(z)) - 1.0));
        const Vector x = rng.unit_vector(3) * rng.uniform(0.1, 4.0);
        const Vector w = rng.unit_vector(3);
        worst_cs = std::max(worst_cs, x.dot(w) - gauge.dual(x) * gauge(w));
      }
    }
    line(10, worst_dual <= 1e-6 && worst_cs <= 1e-9,
         "dual identities: max |F*(Phi(z)) - 1| = " + num(worst_dual) +
             ", max Cauchy-Schwarz excess = " + num(worst_cs));
  }

  // 11. Wedge first-touch exclusion arithmetic.
  {
    const auto excluded = wedge_touch_inequalities(2 * kPi / 3, 2 * kPi / 3, kPi / 2);
    const auto consistent = wedge_touch_inequalities(kPi / 3, kPi / 3, kPi / 2);
    const bool ok = excluded == std::make_pair(false, false) &&
                    consistent == std::make_pair(true, true);
    line(11, ok, "wedge touch inequalities: (2pi/3, 2pi/3, pi/2) excluded, "
                 "(pi/3, pi/3, pi/2) consistent");
  }

  // 12. Planar oracle agreement on the d = 2 scenarios.
  {
    bool ok = true;
    std::string detail;
    for (const std::string name : {"d2_circle", "d2_quarter"}) {
      const Scenario sc = load_scenario(scenario_path(name));
      const VerificationReport& r = runs[name].report;
      const auto& curve_patch = dynamic_cast<const CurvePatch&>(*sc.patch);
      const PlanarCurve polyline = planar_curve_from_patch(curve_patch, 512);
      const double oracle = polygon_hk(*sc.gauge, polyline, sc.container.get());
      const double raster = raster_sweep(*sc.gauge, polyline, sc.container.get(), 256);
      if (!(std::abs(oracle - *r.hk_ratio) <= 0.01 * *r.hk_ratio) || !(raster >= 0.999)) {
        ok = false;
        detail += " " + name;
      }
      if (detail.empty())
        detail = " agreement " + num(std::abs(oracle - *r.hk_ratio)) + ", raster " +
                 num(raster);
    }
    line(12, ok, "planar oracle vs generic machinery:" + detail);
  }

  // 13. Determinism: identical scenario and seed give byte-identical reports.
  {
    const Scenario sc = load_scenario(scenario_path("hemisphere"));
    const std::string first = report_to_json(run_scenario(sc, 1).report);
    const std::string second = report_to_json(run_scenario(sc, 2).report);
    line(13, first == second && first == report_to_json(runs["hemisphere"].report),
         "hemisphere report bytes identical across three runs");
  }

  // Every positive scenario must also have exited cleanly.
  for (const auto& [name, outcome] : runs) {
    if (outcome.exit_code != 0) {
      ++failures;
      std::printf("FAIL scenario %s exited with %d (%s)\n", name.c_str(),
                  outcome.exit_code, outcome.error.c_str());
    }
  }

  std::printf("%s (%d criterion failure%s)\n", failures == 0 ? "ACCEPTED" : "REJECTED",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
