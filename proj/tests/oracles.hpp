#pragma once

// Independent numerical oracles for the test suites. Everything in this file
// computes expected values from first principles (plain central differences,
// brute-force maximization, rasterization, closed-form geometry) without
// touching the implementation paths it is used to check.

#include "wulffkit/common.hpp"
#include "wulffkit/gauge.hpp"

#include <cmath>
#include <functional>

namespace oracles {

using wulffkit::Matrix;
using wulffkit::Vector;
using wulffkit::kPi;

/// Plain central-difference gradient of a scalar field on R^d.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f,
                          const Vector& x, double h = 1e-6) {
  const int d = static_cast<int>(x.size());
  Vector g(d);
  for (int i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e[i] = h;
    g[i] = (f(x + e) - f(x - e)) / (2.0 * h);
  }
  return g;
}

/// Plain central-difference Hessian of a scalar field on R^d.
inline Matrix fd_hessian(const std::function<double(const Vector&)>& f,
                         const Vector& x, double h = 1e-5) {
  const int d = static_cast<int>(x.size());
  Matrix hess(d, d);
  const double f0 = f(x);
  for (int i = 0; i < d; ++i) {
    Vector ei = Vector::Zero(d);
    ei[i] = h;
    hess(i, i) = (f(x + ei) - 2.0 * f0 + f(x - ei)) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      Vector ej = Vector::Zero(d);
      ej[j] = h;
      hess(i, j) = hess(j, i) =
          (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) /
          (4.0 * h * h);
    }
  }
  return hess;
}

/// Brute-force dual gauge: dense direction scan plus golden-section polish
/// around the best grid direction (d = 2 and d = 3 only).
inline double brute_force_dual(const wulffkit::AnisotropyGauge& gauge, const Vector& x,
                               int grid = 256) {
  const int d = gauge.dimension();
  double best = -1.0;
  Vector argbest;
  for (const Vector& z : wulffkit::quasi_uniform_directions(d, d == 2 ? grid : grid * grid)) {
    const double v = x.dot(z) / gauge(z);
    if (v > best) {
      best = v;
      argbest = z;
    }
  }
  // Polish with a shrinking pattern search over the sphere.
  double step = d == 2 ? 2.0 * kPi / grid : std::sqrt(4.0 * kPi) / grid * 2.0;
  Vector z = argbest;
  for (int iter = 0; iter < 60; ++iter) {
    bool moved = false;
    const wulffkit::TangentFrame frame = wulffkit::TangentFrame::at(z);
    for (int i = 0; i < d - 1; ++i) {
      for (double s : {step, -step}) {
        const Vector cand = (std::cos(s) * z + std::sin(s) * frame.basis.col(i)).normalized();
        const double v = x.dot(cand) / gauge(cand);
        if (v > best) {
          best = v;
          z = cand;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
    if (step < 1e-10) break;
  }
  return best;
}

/// Area of the graph z = f(u, v) over the unit disk by midpoint rasterization.
inline double rasterized_graph_area(const std::function<double(double, double)>& fu,
                                    const std::function<double(double, double)>& fv,
                                    int cells = 2048) {
  const double h = 2.0 / cells;
  double area = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double u = -1.0 + (i + 0.5) * h;
    for (int j = 0; j < cells; ++j) {
      const double v = -1.0 + (j + 0.5) * h;
      if (u * u + v * v > 1.0) continue;
      area += std::sqrt(1.0 + wulffkit::sqr(fu(u, v)) + wulffkit::sqr(fv(u, v))) * h * h;
    }
  }
  return area;
}

/// Volume of a radial cap of radius r inside a circular cone of half-angle
/// beta with vertex at the cap center (solid angle formula).
inline double cone_cap_volume(double r, double beta) {
  return 2.0 * kPi * (1.0 - std::cos(beta)) * r * r * r / 3.0;
}

inline double cone_cap_area(double r, double beta) {
  return 2.0 * kPi * (1.0 - std::cos(beta)) * r * r;
}

/// Area of a regular k-gon inscribed in the unit circle.
inline double inscribed_polygon_area(int k) { return 0.5 * k * std::sin(2.0 * kPi / k); }

}  // namespace oracles
