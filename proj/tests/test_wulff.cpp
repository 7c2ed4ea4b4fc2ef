#include "wulffkit/wulff.hpp"

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

}  // namespace

TEST_SUITE_BEGIN("wulff");

TEST_CASE("wulff patches hit the dual level set") {
  auto iso = shared_gauge(AnisotropyGauge::isotropic(3));
  const auto sphere = sample(wulff_patch(iso, Vector::Zero(3), 1.0), 16);
  for (const auto& s : sphere.samples) CHECK(std::abs(s.x.norm() - 1.0) < 1e-12);

  auto ell = shared_gauge(AnisotropyGauge::ellipsoidal(diag3(4, 1, 1)));
  const auto ellipsoid = sample(wulff_patch(ell, vec3(0.1, 0.2, -0.3), 1.0), 16);
  for (const auto& s : ellipsoid.samples) {
    CHECK(std::abs(ell->dual(s.x - vec3(0.1, 0.2, -0.3)) - 1.0) < 1e-6);
    // The ellipsoidal shape is the ellipsoid with semi-axes (2, 1, 1).
    const Vector w = s.x - vec3(0.1, 0.2, -0.3);
    CHECK(std::abs(w[0] * w[0] / 4 + w[1] * w[1] + w[2] * w[2] - 1.0) < 1e-9);
  }

  const double theta = kPi / 3;
  auto cap = shared_gauge(AnisotropyGauge::capillary(theta, vec3(0, 0, 1)));
  const auto capillary = sample(wulff_patch(cap, Vector::Zero(3), 1.0), 16);
  const Vector euclid_center = -std::cos(theta) * vec3(0, 0, 1);
  for (const auto& s : capillary.samples)
    CHECK(std::abs((s.x - euclid_center).norm() - 1.0) < 1e-12);
}

TEST_CASE("wulff caps") {
  auto iso = shared_gauge(AnisotropyGauge::isotropic(3));
  const auto hemi =
      sample(wulff_cap(iso, Vector::Zero(3), 1.0, Cutter::make_half_space(vec3(0, 0, -1), 0)),
             24);
  CHECK(hemi.area() == doctest::Approx(2 * kPi).epsilon(1e-9));

  const auto cone_cap =
      sample(wulff_cap(iso, Vector::Zero(3), 2.0,
                       Cutter::make_cone(Vector::Zero(3), vec3(0, 0, 1), kPi / 3)),
             24);
  CHECK(cone_cap.area() == doctest::Approx(oracles::cone_cap_area(2.0, kPi / 3)).epsilon(1e-9));
}

TEST_CASE("inner touch") {
  auto iso = shared_gauge(AnisotropyGauge::isotropic(3));
  const auto sphere = sample(wulff_patch(iso, Vector::Zero(3), 1.0), 24);
  const TouchResult touch = inner_touch(*iso, sphere, vec3(0.5, 0, 0));
  CHECK(touch.radius == doctest::Approx(0.5).epsilon(1e-8));
  CHECK((touch.point - vec3(1, 0, 0)).norm() < 1e-6);
  CHECK(touch.stratum == TouchResult::Stratum::Interior);
  CHECK(touch.reconstruction_error < 1e-8);
  CHECK(touch.curvature_certificate == doctest::Approx(1.0).epsilon(1e-6));

  // From the center of its own Wulff shape every sample ties.
  auto ell = shared_gauge(AnisotropyGauge::ellipsoidal(diag3(4, 1, 1)));
  const double r = 0.8;
  const auto wulff = sample(wulff_patch(ell, vec3(0.3, 0, 0), r), 16);
  const TouchResult center_touch = inner_touch(*ell, wulff, vec3(0.3, 0, 0));
  CHECK(center_touch.radius == doctest::Approx(r).epsilon(1e-8));
  CHECK(center_touch.tie_count > 100);
  CHECK(center_touch.sample_index == 0);  // ties break to the first sample

  const auto hemi =
      sample(wulff_cap(iso, Vector::Zero(3), 1.0, Cutter::make_half_space(vec3(0, 0, -1), 0)),
             24);
  const TouchResult hemi_touch = inner_touch(*iso, hemi, vec3(0, 0, 0.3));
  CHECK(hemi_touch.stratum == TouchResult::Stratum::Interior);
  CHECK(hemi_touch.radius == doctest::Approx(0.7).epsilon(1e-8));
  CHECK((hemi_touch.point - vec3(0, 0, 1)).norm() < 1e-6);

  CHECK_THROWS_AS(inner_touch(*iso, sphere, vec3(2, 0, 0)), Error);
}

TEST_CASE("inner touch radius decreases toward the touch point") {
  auto ell = shared_gauge(AnisotropyGauge::ellipsoidal(diag3(4, 1, 1)));
  const auto wulff = sample(wulff_patch(ell, Vector::Zero(3), 1.0), 16);
  Rng rng(0x5eed0201);
  for (int i = 0; i < 100; ++i) {
    const Vector y = rng.unit_vector(3) * rng.uniform(0.05, 0.5);
    const TouchResult touch = inner_touch(*ell, wulff, y, nullptr, true);
    const double s = rng.uniform(0.1, 0.9);
    const Vector closer = y + s * (touch.point - y);
    const TouchResult touch2 = inner_touch(*ell, wulff, closer, nullptr, true);
    CHECK(touch2.radius <= touch.radius * (1.0 + 1e-9));
  }
}

TEST_CASE("interior-only touches on admissible caps") {
  auto iso = shared_gauge(AnisotropyGauge::isotropic(3));
  const auto hemi =
      sample(wulff_cap(iso, Vector::Zero(3), 1.0, Cutter::make_half_space(vec3(0, 0, -1), 0)),
             24);
  Rng rng(0x5eed0202);
  int tested = 0;
  while (tested < 200) {
    Vector y(3);
    y << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 1);
    if (!hemi.region_tester().contains(y)) continue;
    ++tested;
    const TouchResult touch = inner_touch(*iso, hemi, y, nullptr, true);
    CHECK(touch.stratum == TouchResult::Stratum::Interior);
    CHECK(touch.reconstruction_error < 1e-6);
  }
}

TEST_CASE("outer touch") {
  auto iso = shared_gauge(AnisotropyGauge::isotropic(3));
  const auto sphere = sample(wulff_patch(iso, Vector::Zero(3), 1.0), 24);
  const TouchResult touch = outer_touch(*iso, sphere, Vector::Zero(3));
  CHECK(touch.radius == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(touch.curvature_certificate >= 1.0 / touch.radius - 1e-8);

  const auto cap =
      sample(wulff_cap(iso, Vector::Zero(3), 2.0,
                       Cutter::make_cone(Vector::Zero(3), vec3(0, 0, 1), kPi / 3)),
             24);
  const TouchResult cap_touch = outer_touch(*iso, cap, Vector::Zero(3));
  CHECK(cap_touch.radius == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(cap_touch.curvature_certificate == doctest::Approx(0.5).epsilon(1e-6));

  // Radial profile 1 + 0.05 <z, E3>^2 written in the Legendre basis.
  auto bumped = SphereMappedPatch::closed_surface(std::make_shared<RadialMap>(
      Vector::Zero(3), 1.0 + 0.05 / 3.0,
      std::vector<PerturbationTerm>{{2, vec3(0, 0, 1), 0.1 / 3.0}}));
  const auto bumped_surface = sample(bumped, 32);
  const TouchResult bump_touch = outer_touch(*iso, bumped_surface, Vector::Zero(3));
  CHECK(bump_touch.radius == doctest::Approx(1.05).epsilon(1e-7));
  CHECK(std::abs(std::abs(bump_touch.point[2]) - 1.05) < 1e-5);
  CHECK(bump_touch.curvature_certificate >= 1.0 / bump_touch.radius - 1e-6);
}

TEST_SUITE_END();
