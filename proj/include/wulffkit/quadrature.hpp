#pragma once

#include "wulffkit/common.hpp"

namespace wulffkit {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial; exact to machine precision for degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Midpoint (periodic trapezoid) rule on [0, period); spectrally accurate for
/// smooth periodic integrands.
QuadratureRule periodic_rule(int n, double period);

}  // namespace wulffkit
