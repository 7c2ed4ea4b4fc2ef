#include "wulffkit/common.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace wulffkit {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NonUnitInput: return "NonUnitInput";
    case ErrorCode::NotOnGeodesic: return "NotOnGeodesic";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::DegenerateImmersion: return "DegenerateImmersion";
    case ErrorCode::ClosedSurface: return "ClosedSurface";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotMeanConvex: return "NotMeanConvex";
    case ErrorCode::NotInside: return "NotInside";
    case ErrorCode::EmptyCap: return "EmptyCap";
    case ErrorCode::NoTrim: return "NoTrim";
    case ErrorCode::NonTransversalCut: return "NonTransversalCut";
    case ErrorCode::SingularBoundaryContact: return "SingularBoundaryContact";
    case ErrorCode::AnisotropicOnEdge: return "AnisotropicOnEdge";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::SamplingFailure: return "SamplingFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PreconditionFailure: return "PreconditionFailure";
    case ErrorCode::CheckFailure: return "CheckFailure";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double Rng::normal01() {
  // Box-Muller on the deterministic uniform stream.
  double u1 = uniform01();
  while (u1 <= 1e-300) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Vector Rng::unit_vector(int dim) {
  Vector v(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal01();
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

namespace {
double pairwise_sum_range(std::span<const double> values, std::size_t lo, std::size_t hi) {
  const std::size_t n = hi - lo;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += values[i];
    return s;
  }
  const std::size_t mid = lo + n / 2;
  return pairwise_sum_range(values, lo, mid) + pairwise_sum_range(values, mid, hi);
}
}  // namespace

double pairwise_sum(std::span<const double> values) {
  return values.empty() ? 0.0 : pairwise_sum_range(values, 0, values.size());
}

Vector pairwise_sum(const std::vector<Vector>& values, int dim) {
  Vector out = Vector::Zero(dim);
  std::vector<double> comp(values.size());
  for (int k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < values.size(); ++i) comp[i] = values[i][k];
    out[k] = pairwise_sum(comp);
  }
  return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2 * threads) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

double angle_between(const Vector& a, const Vector& b) {
  const double na = a.norm(), nb = b.norm();
  if (na < 1e-300 || nb < 1e-300) fail(ErrorCode::ZeroVector, "angle of zero vector");
  const Vector ua = a / na, ub = b / nb;
  // atan2 of rejection vs dot is stable at both ends of [0, pi].
  const double c = ua.dot(ub);
  const double s = (ua - c * ub).norm();
  return std::atan2(s, c);
}

}  // namespace wulffkit
