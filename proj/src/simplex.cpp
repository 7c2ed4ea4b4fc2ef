#include "wulffkit/simplex.hpp"

#include <cmath>

namespace wulffkit {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-9;

// Tableau rows 0..m-1 hold the constraints, row m the reduced costs; the
// last column is the right-hand side. Minimizes the cost row's objective
// with Bland's rule. Returns false on unboundedness.
bool pivot_to_optimum(Matrix& t, std::vector<int>& basis, int ncols) {
  const int m = static_cast<int>(t.rows()) - 1;
  for (int iter = 0; iter < 20000; ++iter) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (t(m, j) < -kCostTol) {
        enter = j;
        break;  // Bland: smallest improving index
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t(i, enter) > kPivotTol) {
        const double ratio = t(i, ncols) / t(i, enter);
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;  // unbounded
    t.row(leave) /= t(leave, enter);
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f != 0.0) t.row(i) -= f * t.row(leave);
    }
    basis[leave] = enter;
  }
  fail(ErrorCode::ConvergenceFailure, "simplex iteration limit exceeded");
}

}  // namespace

LinearProgramResult solve_linear_program(const Matrix& a, const Vector& b, const Vector& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  LinearProgramResult result;
  result.point = Vector::Zero(n);
  if (m == 0) {
    // No constraints: bounded only for c = 0.
    result.feasible = true;
    result.bounded = c.norm() < kCostTol;
    return result;
  }

  // Standard form: x = x+ - x-, slack per row, artificials where needed.
  const int nslack0 = 2 * n;
  int ncols = 2 * n + m;
  std::vector<int> basis(m, -1);
  std::vector<int> artificial_rows;
  Matrix t = Matrix::Zero(m + 1, 2 * n + 2 * m + 1);
  const int rhs0 = 2 * n + 2 * m;
  for (int i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      t(i, j) = sign * a(i, j);
      t(i, n + j) = -sign * a(i, j);
    }
    t(i, nslack0 + i) = sign;
    t(i, rhs0) = sign * b[i];
    if (sign > 0.0) {
      basis[i] = nslack0 + i;
    } else {
      artificial_rows.push_back(i);
    }
  }
  int nart = 0;
  for (const int i : artificial_rows) {
    t(i, ncols + nart) = 1.0;
    basis[i] = ncols + nart;
    ++nart;
  }
  const int ncols_p1 = ncols + nart;

  if (nart > 0) {
    // Phase 1: minimize the sum of artificials. Reduced costs of the basic
    // artificial columns must come out as zero.
    for (const int i : artificial_rows) t.row(m) -= t.row(i);
    for (int j = ncols; j < ncols_p1; ++j) t(m, j) = 0.0;
    if (!pivot_to_optimum(t, basis, ncols_p1))
      fail(ErrorCode::ConvergenceFailure, "phase-1 simplex unbounded");
    if (-t(m, rhs0) > 1e-7) return result;  // infeasible
    // Drive leftover artificials out of the basis.
    for (int i = 0; i < m; ++i) {
      if (basis[i] >= ncols) {
        int pivot_col = -1;
        for (int j = 0; j < ncols; ++j) {
          if (std::abs(t(i, j)) > kPivotTol) {
            pivot_col = j;
            break;
          }
        }
        if (pivot_col < 0) continue;  // redundant row
        t.row(i) /= t(i, pivot_col);
        for (int k = 0; k <= m; ++k) {
          if (k == i) continue;
          const double f = t(k, pivot_col);
          if (f != 0.0) t.row(k) -= f * t.row(i);
        }
        basis[i] = pivot_col;
      }
    }
    // Forbid artificials from re-entering.
    for (int j = ncols; j < ncols_p1; ++j) t.col(j).setZero();
  }
  result.feasible = true;

  // Phase 2: minimize -c'(x+ - x-).
  t.row(m).setZero();
  for (int j = 0; j < n; ++j) {
    t(m, j) = -c[j];
    t(m, n + j) = c[j];
  }
  for (int i = 0; i < m; ++i) {
    const int bj = basis[i];
    const double cost = t(m, bj);
    if (cost != 0.0) t.row(m) -= cost * t.row(i);
  }
  if (!pivot_to_optimum(t, basis, ncols)) {
    result.bounded = false;
    return result;
  }
  result.bounded = true;
  Vector values = Vector::Zero(ncols);
  for (int i = 0; i < m; ++i)
    if (basis[i] < ncols) values[basis[i]] = t(i, rhs0);
  for (int j = 0; j < n; ++j) result.point[j] = values[j] - values[n + j];
  result.objective = c.dot(result.point);
  return result;
}

}  // namespace wulffkit
