#include "wulffkit/surface.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wulffkit/mesh.hpp"

using namespace wulffkit;

namespace {

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

Matrix diag3(double a, double b, double c) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

std::shared_ptr<const AnisotropyGauge> shared_gauge(AnisotropyGauge g) {
  return std::make_shared<AnisotropyGauge>(std::move(g));
}

std::shared_ptr<SphereMappedPatch> unit_sphere_patch() {
  return SphereMappedPatch::closed_surface(
      std::make_shared<RadialMap>(Vector::Zero(3), 1.0, std::vector<PerturbationTerm>{}));
}

std::shared_ptr<SphereMappedPatch> hemisphere_patch() {
  auto map = std::make_shared<WulffMap>(shared_gauge(AnisotropyGauge::isotropic(3)),
                                        Vector::Zero(3), 1.0);
  return SphereMappedPatch::cap(map, Cutter::make_half_space(vec3(0, 0, -1), 0.0));
}

std::shared_ptr<RectanglePatch> paraboloid_rect_patch() {
  auto jet = [](double u, double v) {
    SurfaceJet j;
    j.x = vec3(u, v, 0.5 * (u * u + v * v));
    j.tangents.resize(3, 2);
    j.tangents.col(0) = vec3(1, 0, u);
    j.tangents.col(1) = vec3(0, 1, v);
    j.second = {vec3(0, 0, 1), vec3(0, 0, 0), vec3(0, 0, 1)};
    return j;
  };
  return std::make_shared<RectanglePatch>(jet, -0.8, 0.8, -0.8, 0.8, false);
}

}  // namespace

TEST_SUITE_BEGIN("surface");

TEST_CASE("sampling areas") {
  const auto sphere = sample(unit_sphere_patch(), 32);
  CHECK(sphere.area() == doctest::Approx(4.0 * kPi).epsilon(1e-6 / (4.0 * kPi)));

  auto flat_jet = [](double u, double v) {
    SurfaceJet j;
    j.x = vec3(u, v, 0.0);
    j.tangents.resize(3, 2);
    j.tangents.col(0) = vec3(1, 0, 0);
    j.tangents.col(1) = vec3(0, 1, 0);
    j.second = {vec3(0, 0, 0), vec3(0, 0, 0), vec3(0, 0, 0)};
    return j;
  };
  const auto square =
      sample(std::make_shared<RectanglePatch>(flat_jet, 0, 1, 0, 1, true), 8);
  CHECK(square.area() == doctest::Approx(1.0).epsilon(1e-14));

  // Graph over the unit disk: closed form plus an independent rasterization.
  auto graph = std::make_shared<DiskGraphPatch>(
      [](double u, double v) { return 0.5 * (u * u + v * v); },
      [](double u, double) { return u; }, [](double, double v) { return v; },
      [](double, double) { return 1.0; }, [](double, double) { return 0.0; },
      [](double, double) { return 1.0; }, 1.0, false);
  const double closed_form = 2.0 * kPi / 3.0 * (2.0 * std::sqrt(2.0) - 1.0);
  const double raster = oracles::rasterized_graph_area(
      [](double u, double) { return u; }, [](double, double v) { return v; }, 1500);
  CHECK(raster == doctest::Approx(closed_form).epsilon(3e-3));
  CHECK(sample(graph, 24).area() == doctest::Approx(closed_form).epsilon(1e-10));
}

TEST_CASE("fundamental forms") {
  const auto sphere = unit_sphere_patch();
  Vector u(2);
  u << 0.7, 1.3;
  const FundamentalForms forms = fundamental_forms(*sphere, 0, u);
  CHECK((forms.weingarten - Matrix::Identity(2, 2)).norm() < 1e-9);
  CHECK((forms.normal - sphere->direction(0, 0.7, 1.3)).norm() < 1e-12);

  const double radius = 2.5;
  auto cyl_jet = [radius](double uu, double vv) {
    SurfaceJet j;
    j.x = vec3(radius * std::cos(uu), radius * std::sin(uu), vv);
    j.tangents.resize(3, 2);
    j.tangents.col(0) = vec3(-radius * std::sin(uu), radius * std::cos(uu), 0);
    j.tangents.col(1) = vec3(0, 0, 1);
    j.second = {vec3(-radius * std::cos(uu), -radius * std::sin(uu), 0), vec3(0, 0, 0),
                vec3(0, 0, 0)};
    return j;
  };
  const RectanglePatch cylinder(cyl_jet, 0, 2 * kPi, -1, 1, true);
  Vector cu(2);
  cu << 0.9, 0.2;
  const FundamentalForms cf = fundamental_forms(cylinder, 0, cu);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cf.metric.inverse() * cf.second *
                                            Matrix::Identity(2, 2));
  Vector vals = Eigen::EigenSolver<Matrix>(cf.weingarten).eigenvalues().real();
  std::sort(vals.data(), vals.data() + 2);
  CHECK(vals[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(vals[1] == doctest::Approx(1.0 / radius).epsilon(1e-12));

  Vector origin(2);
  origin << 0.0, 0.0;
  const FundamentalForms gf = fundamental_forms(*paraboloid_rect_patch(), 0, origin);
  CHECK((gf.weingarten - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((gf.normal - vec3(0, 0, -1)).norm() < 1e-12);
}

TEST_CASE("anisotropic shape data") {
  const auto iso = AnisotropyGauge::isotropic(3);
  const auto sphere = sample(unit_sphere_patch(), 16);
  const auto shape = anisotropic_shape(iso, sphere);
  for (const auto& s : shape.samples) {
    CHECK(s.curvatures[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.curvatures[1] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.mean_curvature == doctest::Approx(2.0).epsilon(1e-8));
  }

  // Any gauge on its own Wulff shape has principal curvatures 1/r.
  const double r = 0.7;
  auto ell = shared_gauge(AnisotropyGauge::ellipsoidal(diag3(4, 1, 1)));
  const auto wulff =
      sample(SphereMappedPatch::closed_surface(
                 std::make_shared<WulffMap>(ell, vec3(0.2, -0.1, 0.3), r)),
             64);
  const auto wulff_shape = anisotropic_shape(*ell, wulff);
  double max_kappa_err = 0.0;
  double max_nu_err = 0.0;
  for (std::size_t i = 0; i < wulff.samples.size(); ++i) {
    const auto& ss = wulff_shape.samples[i];
    max_kappa_err = std::max({max_kappa_err, std::abs(ss.curvatures[0] - 1.0 / r),
                              std::abs(ss.curvatures[1] - 1.0 / r)});
    max_nu_err = std::max(
        max_nu_err,
        (ss.nu_F - (wulff.samples[i].x - vec3(0.2, -0.1, 0.3)) / r).norm());
  }
  CHECK(max_kappa_err < 5e-4);
  CHECK(max_nu_err < 5e-6);
  // Level-set fidelity of the parametrization.
  for (std::size_t i = 0; i < wulff.samples.size(); i += 7) {
    CHECK(std::abs(ell->dual(wulff.samples[i].x - vec3(0.2, -0.1, 0.3)) - r) < 1e-6);
  }

  // The capillary family leaves the shape operator untouched.
  const auto cap_gauge = AnisotropyGauge::capillary(kPi / 3, vec3(0, 0, 1));
  const auto perturbed = sample(
      SphereMappedPatch::closed_surface(std::make_shared<RadialMap>(
          Vector::Zero(3), 1.0, std::vector<PerturbationTerm>{{2, vec3(0, 0, 1), 0.1}})),
      16);
  const auto iso_shape = anisotropic_shape(iso, perturbed);
  const auto cap_shape = anisotropic_shape(cap_gauge, perturbed);
  double max_h_gap = 0.0;
  for (std::size_t i = 0; i < perturbed.samples.size(); ++i)
    max_h_gap = std::max(max_h_gap, std::abs(iso_shape.samples[i].mean_curvature -
                                             cap_shape.samples[i].mean_curvature));
  CHECK(max_h_gap <= 1e-10);
}

TEST_CASE("shape operator is self-adjoint and has real anisotropic spectrum") {
  auto ell = shared_gauge(AnisotropyGauge::ellipsoidal(diag3(4, 1, 1)));
  const auto perturbed = sample(
      SphereMappedPatch::closed_surface(std::make_shared<RadialMap>(
          Vector::Zero(3), 1.0, std::vector<PerturbationTerm>{{3, vec3(0, 0, 1), 0.07}})),
      12);
  const auto shape = anisotropic_shape(*ell, perturbed);
  for (std::size_t i = 0; i < perturbed.samples.size(); i += 3) {
    const auto& s = perturbed.samples[i];
    CHECK((s.dnu - s.dnu.transpose()).norm() <= 1e-9);
    // Oracle: the nonsymmetric eigensolver on A_F dnu agrees and is real.
    Eigen::EigenSolver<Matrix> eig(shape.samples[i].shape_operator);
    CHECK(eig.eigenvalues().imag().cwiseAbs().maxCoeff() <= 1e-9);
    Vector real_parts = eig.eigenvalues().real();
    std::sort(real_parts.data(), real_parts.data() + real_parts.size());
    CHECK((real_parts - shape.samples[i].curvatures).norm() < 1e-7);
  }
}

TEST_CASE("integrate examples") {
  const auto sphere = sample(unit_sphere_patch(), 32);
  CHECK(integrate(sphere, [](const SurfaceSample&) { return 1.0; }) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-7));
  CHECK(integrate(sphere, [](const SurfaceSample& s) { return s.x.dot(s.normal); }) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-7));

  auto ell = shared_gauge(AnisotropyGauge::ellipsoidal(diag3(4, 1, 1)));
  const auto wulff = sample(
      SphereMappedPatch::closed_surface(std::make_shared<WulffMap>(ell, Vector::Zero(3), 1.0)),
      48);
  // Divergence-theorem oracle: on a Wulff shape <x - x0, nu> = r F(nu), so
  // the F(nu) integral equals (d/r) |W|; here |W| = (4 pi / 3) * 2.
  const double wulff_volume = enclosed_volume(wulff);
  CHECK(wulff_volume == doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-8));
  const double f_integral =
      integrate(wulff, [&](const SurfaceSample& s) { return (*ell)(s.normal); });
  CHECK(f_integral == doctest::Approx(3.0 * wulff_volume).epsilon(1e-8));
  CHECK(f_integral == doctest::Approx(8.0 * kPi).epsilon(1e-4 / (8.0 * kPi)));
}

TEST_CASE("enclosed volumes") {
  CHECK(enclosed_volume(sample(unit_sphere_patch(), 32)) ==
        doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-9));
  CHECK(enclosed_volume(sample(hemisphere_patch(), 32)) ==
        doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-9));

  // Radial cap in a circular cone: solid-angle oracle.
  auto map = std::make_shared<WulffMap>(shared_gauge(AnisotropyGauge::isotropic(3)),
                                        Vector::Zero(3), 1.0);
  const auto cap =
      sample(SphereMappedPatch::cap(map, Cutter::make_cone(Vector::Zero(3), vec3(0, 0, 1),
                                                           kPi / 3)),
             32);
  CHECK(enclosed_volume(cap) ==
        doctest::Approx(oracles::cone_cap_volume(1.0, kPi / 3)).epsilon(1e-9));
  CHECK(oracles::cone_cap_volume(1.0, kPi / 3) == doctest::Approx(kPi / 3.0).epsilon(1e-14));
  CHECK(cap.area() == doctest::Approx(oracles::cone_cap_area(1.0, kPi / 3)).epsilon(1e-9));
}

TEST_CASE("boundary traces") {
  const auto iso = AnisotropyGauge::isotropic(3);
  const auto hemi = hemisphere_patch();
  const BoundaryTrace trace = boundary_trace(*hemi, iso, 16);
  for (const auto& s : trace.samples) {
    CHECK((s.mu - vec3(0, 0, -1)).norm() < 1e-9);
    CHECK((s.mu_F - s.mu).norm() < 1e-12);
    CHECK(std::abs(s.mu.dot(s.normal)) < 1e-10);
    CHECK(std::abs(s.mu.norm() - 1.0) < 1e-10);
  }
  // Total boundary length of the equator.
  std::vector<double> w;
  for (const auto& s : trace.samples) w.push_back(s.weight);
  CHECK(pairwise_sum(w) == doctest::Approx(2.0 * kPi).epsilon(1e-10));

  // Capillary-gauge cap meeting the plane at its contact angle is an
  // anisotropic free boundary: <nu_F, -E3> = 0 along the boundary.
  auto cap_gauge = shared_gauge(AnisotropyGauge::capillary(kPi / 3, vec3(0, 0, 1)));
  const auto cap_patch = SphereMappedPatch::cap(
      std::make_shared<WulffMap>(cap_gauge, Vector::Zero(3), 1.0),
      Cutter::make_half_space(vec3(0, 0, -1), 0.0));
  const BoundaryTrace cap_trace = boundary_trace(*cap_patch, *cap_gauge, 16);
  for (const auto& s : cap_trace.samples) {
    CHECK(std::abs(s.nu_F.dot(vec3(0, 0, -1))) < 1e-9);
    CHECK(std::abs(s.mu_F.dot(s.nu_F)) < 1e-8);
  }

  // Ellipsoidal Wulff cap cut through its center.
  auto ell = shared_gauge(AnisotropyGauge::ellipsoidal(diag3(4, 1, 1)));
  const auto ell_cap =
      SphereMappedPatch::cap(std::make_shared<WulffMap>(ell, Vector::Zero(3), 1.0),
                             Cutter::make_half_space(vec3(0, 0, -1), 0.0));
  const BoundaryTrace ell_trace = boundary_trace(*ell_cap, *ell, 16);
  for (const auto& s : ell_trace.samples) {
    CHECK(std::abs(s.mu_F.dot(s.nu_F)) < 1e-8);
    CHECK(std::abs(s.nu_F.dot(vec3(0, 0, 1))) < 1e-9);
  }

  CHECK_THROWS_AS(boundary_trace(*unit_sphere_patch(), iso, 8), Error);

  // Rectangle and disk-graph patches expose their rims the same way.
  const BoundaryTrace rect_trace = boundary_trace(*paraboloid_rect_patch(), iso, 8);
  double rect_length = 0.0;
  for (const auto& s : rect_trace.samples) {
    CHECK(std::abs(s.mu.norm() - 1.0) < 1e-10);
    CHECK(std::abs(s.mu.dot(s.normal)) < 1e-10);
    rect_length += s.weight;
  }
  CHECK(rect_length > 4 * 1.6);  // longer than the flat perimeter

  const DiskGraphPatch flat_disk([](double, double) { return 0.0; },
                                 [](double, double) { return 0.0; },
                                 [](double, double) { return 0.0; },
                                 [](double, double) { return 0.0; },
                                 [](double, double) { return 0.0; },
                                 [](double, double) { return 0.0; }, 2.0, true);
  const BoundaryTrace disk_trace = boundary_trace(flat_disk, iso, 8);
  std::vector<double> rim;
  for (const auto& s : disk_trace.samples) {
    CHECK((s.mu - s.x / 2.0).norm() < 1e-10);  // outward radial co-normal
    rim.push_back(s.weight);
  }
  CHECK(pairwise_sum(rim) == doctest::Approx(4 * kPi).epsilon(1e-10));
}

TEST_CASE("cap trimming edge cases") {
  auto map = std::make_shared<WulffMap>(shared_gauge(AnisotropyGauge::isotropic(3)),
                                        Vector::Zero(3), 1.0);
  CHECK_THROWS_AS(SphereMappedPatch::cap(map, Cutter::make_half_space(vec3(0, 0, -1), -2.0)),
                  Error);  // empty
  CHECK_THROWS_AS(SphereMappedPatch::cap(map, Cutter::make_half_space(vec3(0, 0, -1), 2.0)),
                  Error);  // no trim
  // Hemisphere cut through the center of an isotropic shape is half the area.
  const auto hemi = sample(hemisphere_patch(), 24);
  CHECK(hemi.area() == doctest::Approx(2.0 * kPi).epsilon(1e-9));
}

TEST_CASE("degenerate and unclosed inputs are rejected") {
  // A rank-deficient immersion fails the metric gate.
  auto degenerate_jet = [](double u, double v) {
    SurfaceJet j;
    j.x = vec3(u + v, u + v, 0.0);
    j.tangents.resize(3, 2);
    j.tangents.col(0) = vec3(1, 1, 0);
    j.tangents.col(1) = vec3(1, 1, 0);
    j.second = {vec3(0, 0, 0), vec3(0, 0, 0), vec3(0, 0, 0)};
    return j;
  };
  CHECK_THROWS_AS(
      sample(std::make_shared<RectanglePatch>(degenerate_jet, 0, 1, 0, 1, true), 8), Error);

  // A bare patch with boundary and no wetted face does not close a region.
  auto flat_jet = [](double u, double v) {
    SurfaceJet j;
    j.x = vec3(u, v, 0.0);
    j.tangents.resize(3, 2);
    j.tangents.col(0) = vec3(1, 0, 0);
    j.tangents.col(1) = vec3(0, 1, 0);
    j.second = {vec3(0, 0, 0), vec3(0, 0, 0), vec3(0, 0, 0)};
    return j;
  };
  const auto open_square =
      sample(std::make_shared<RectanglePatch>(flat_jet, 0, 1, 0, 1, true), 8);
  CHECK_THROWS_AS(enclosed_volume(open_square), Error);

  CHECK_THROWS_AS(sample(unit_sphere_patch(), 3), Error);
}

TEST_CASE("region parity tester") {
  const auto sphere = sample(unit_sphere_patch(), 12);
  const RegionTester& tester = sphere.region_tester();
  CHECK(tester.contains(vec3(0.2, 0.1, -0.3)));
  CHECK(!tester.contains(vec3(1.2, 0.0, 0.0)));

  const auto hemi = sample(hemisphere_patch(), 12);
  const RegionTester& htester = hemi.region_tester();
  CHECK(htester.contains(vec3(0, 0, 0.3)));
  CHECK(!htester.contains(vec3(0, 0, -0.3)));
  CHECK(!htester.contains(vec3(0.9, 0.9, 0.1)));
}

TEST_CASE("quadrature converges under refinement") {
  auto patch = SphereMappedPatch::closed_surface(std::make_shared<RadialMap>(
      Vector::Zero(3), 1.0,
      std::vector<PerturbationTerm>{{3, vec3(0, 0, 1), 0.15}, {2, vec3(1, 0, 0), 0.1}}));
  const double reference = sample(patch, 80).area();
  const double err_coarse = std::abs(sample(patch, 6).area() - reference);
  const double err_fine = std::abs(sample(patch, 12).area() - reference);
  CHECK(err_fine > 0.0);
  CHECK(err_coarse / err_fine >= 3.5);

  const double vol_reference = enclosed_volume(sample(patch, 80));
  const double verr_coarse = std::abs(enclosed_volume(sample(patch, 6)) - vol_reference);
  const double verr_fine = std::abs(enclosed_volume(sample(patch, 12)) - vol_reference);
  CHECK(verr_coarse / verr_fine >= 3.5);
}

TEST_SUITE_END();
