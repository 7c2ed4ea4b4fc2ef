#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wulffkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

constexpr double kPi = 3.14159265358979323846;

/// Failure modes surfaced by the toolkit. Library routines throw Error with
/// one of these codes; the CLI maps codes onto process exit status.
enum class ErrorCode {
  ZeroVector,
  NonUnitInput,
  NotOnGeodesic,
  ConvergenceFailure,
  NotConvex,
  DegenerateImmersion,
  ClosedSurface,
  NotClosed,
  NotMeanConvex,
  NotInside,
  EmptyCap,
  NoTrim,
  NonTransversalCut,
  SingularBoundaryContact,
  AnisotropicOnEdge,
  SelfIntersecting,
  SamplingFailure,
  ParseError,
  PreconditionFailure,
  CheckFailure,
  IoError,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

const char* error_code_name(ErrorCode code);

/// Deterministic seeded random source. All randomness in the toolkit flows
/// through this wrapper; raw engine words are mapped to doubles directly so
/// that streams are identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t bits() { return engine_(); }
  double normal01();
  /// Uniform point on the unit sphere in R^dim.
  Vector unit_vector(int dim);

 private:
  std::mt19937_64 engine_;
};

/// Sums in a fixed pairwise (divide and conquer) order so that results do not
/// depend on how the terms were produced.
double pairwise_sum(std::span<const double> values);

/// Pairwise sum of a vector-valued sequence, entrywise deterministic.
Vector pairwise_sum(const std::vector<Vector>& values, int dim);

/// Runs body(i) for i in [0, n). With threads > 1 the iterations are split
/// into contiguous chunks; each index writes only to its own slots, so the
/// result is independent of the thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

inline double sqr(double x) { return x * x; }

/// Angle between two nonzero vectors in [0, pi], robust near 0 and pi.
double angle_between(const Vector& a, const Vector& b);

/// Rotate a planar vector by +pi/2.
inline Eigen::Vector2d rot90(const Eigen::Vector2d& v) {
  return Eigen::Vector2d(-v.y(), v.x());
}

}  // namespace wulffkit
