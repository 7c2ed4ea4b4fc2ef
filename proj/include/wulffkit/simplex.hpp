#pragma once

#include "wulffkit/common.hpp"

namespace wulffkit {

struct LinearProgramResult {
  bool feasible = false;
  bool bounded = false;
  double objective = 0.0;
  Vector point;
};

/// Maximize c'x subject to A x <= b with a dense two-phase simplex method
/// (Bland's rule). Intended for the small systems arising from container
/// validation; callers bound the feasible set with box rows when the input
/// may be unbounded.
LinearProgramResult solve_linear_program(const Matrix& a, const Vector& b, const Vector& c);

}  // namespace wulffkit
