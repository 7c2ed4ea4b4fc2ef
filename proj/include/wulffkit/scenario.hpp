#pragma once

#include "wulffkit/oracle2d.hpp"
#include "wulffkit/report.hpp"

namespace wulffkit {

/// A declarative verification scenario: gauge, surface, container, the checks
/// to run and their tolerances. Parsed strictly (unknown fields rejected);
/// all angles in radians.
struct Scenario {
  int version = 1;
  std::string name;
  int dimension = 3;
  std::uint64_t seed = 0;
  int resolution = 64;
  int coverage_samples = 1000;
  std::vector<std::string> checks;
  std::optional<bool> expect_equality;
  ReportTolerances tolerances;

  std::shared_ptr<const AnisotropyGauge> gauge;
  std::shared_ptr<const ParametrizedPatch> patch;
  std::shared_ptr<const ConvexContainer> container;  // null for free-standing surfaces
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

struct RunOutcome {
  VerificationReport report;
  int exit_code = 0;
  std::string error;  // diagnostic when a precondition or parse step failed
};

/// Executes the requested checks in dependency order. Exit code 0 when every
/// requested check passes, 1 on a failed check, 3 on a violated precondition.
RunOutcome run_scenario(const Scenario& scenario, int threads = 1);

/// Loads, optionally overrides checks/resolution/seed from the command line,
/// runs, and writes the JSON report next to the input (or to report_path).
/// Parse failures exit with code 2.
RunOutcome run_scenario_file(const std::string& path, int threads = 1,
                             const std::string& report_path = "",
                             const std::vector<std::string>& check_override = {},
                             int resolution_override = 0,
                             std::optional<std::uint64_t> seed_override = {});

/// OBJ export of the sampled surface (boundary polyline included for caps)
/// plus optional per-sample CSV fields (x, y, z, H^F, kappa, F(nu)).
void export_scenario_mesh(const Scenario& scenario, const std::string& obj_path,
                          const std::string& fields_csv_path = "",
                          int resolution_override = 0);

/// Runs every *.json scenario under scenario_dir in lexicographic order, one
/// CSV row per scenario written to table_path. Returns 1 if any scenario
/// fails or errors, 0 otherwise (including an empty directory).
int run_batch(const std::string& scenario_dir, const std::string& table_path,
              int threads = 1);

/// Maps library error codes onto process exit codes (parse 2, precondition 3,
/// failed check 1).
int exit_code_for(ErrorCode code);

}  // namespace wulffkit
