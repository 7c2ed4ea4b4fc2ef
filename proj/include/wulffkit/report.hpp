#pragma once

#include "wulffkit/hk.hpp"

#include <map>
#include <optional>
#include <string>

namespace wulffkit {

struct CheckOutcome {
  bool ran = false;
  bool passed = false;
  std::string detail;
};

/// Every threshold used by the scenario checks, recorded in the report so a
/// result is auditable without the scenario file.
struct ReportTolerances {
  double admissibility = 1e-6;       // max <nu_F, N> on the boundary
  double hk_slack = 1e-3;            // ratio >= 1 - slack; |ratio - 1| on equality cases
  double minkowski = 1e-4;           // area-normalized residual
  double minkowski_consistency = 1e-6;  // divergence vs boundary form
  double chain_slack = 1e-3;         // relative slack in the chain inequality
  double sweep_closed = 1e-4;        // sweep vs volume on closed Wulff shapes
  double equality_epsilon = 5e-3;    // near-equality flag
  double coverage_touch = 1e-6;      // slack in r <= t_max
  double touch_reconstruction = 1e-6;
};

/// Evaluated functionals, residuals, margins and pass/fail flags for one
/// scenario. Wall time is kept for console display only and never serialized:
/// reports must be byte-identical across runs of the same scenario and seed.
struct VerificationReport {
  int version = 1;
  std::string name;
  int dimension = 3;
  int resolution = 0;
  std::uint64_t seed = 0;

  std::optional<double> area;
  std::optional<double> volume;
  std::optional<double> hk_functional;
  std::optional<double> hk_ratio;
  std::optional<double> sweep_volume;
  std::optional<double> minkowski_residual;  // area-normalized magnitude
  std::optional<double> minkowski_raw;
  std::optional<double> minkowski_boundary_form;
  std::optional<double> coverage_fraction;
  std::optional<int> coverage_witnesses;
  std::optional<double> min_mean_curvature;
  std::optional<double> max_mean_curvature;
  std::optional<AdmissibilityReport> admissibility;
  std::optional<EqualityDiagnosis> equality;

  ReportTolerances tolerances;
  std::map<std::string, CheckOutcome> checks;
  double wall_seconds = 0.0;  // not serialized

  bool all_passed() const;
};

/// Byte-stable JSON serialization (sorted keys, shortest round-trip floats).
std::string report_to_json(const VerificationReport& report);

/// Parses a serialized report, validating the schema version it declares.
VerificationReport report_from_json(const std::string& text);

std::string report_csv_header();
std::string report_csv_row(const VerificationReport& report, const std::string& status);

}  // namespace wulffkit
