// Command-line runner for anisotropic-geometry verification scenarios.
//
//   wulffkit run <scenario.json>      run the requested checks, write a report
//   wulffkit batch <dir>              run every scenario in a directory
//   wulffkit mesh <scenario.json>     export the sampled surface as OBJ/CSV
//   wulffkit gauge-check <scenario.json>   validate the gauge in isolation

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "wulffkit/scenario.hpp"

using namespace wulffkit;

namespace {

int cmd_run(const std::string& path, const std::vector<std::string>& checks, int resolution,
            std::optional<std::uint64_t> seed, int threads, const std::string& out) {
  try {
    const RunOutcome outcome =
        run_scenario_file(path, threads, out, checks, resolution, seed);
    for (const auto& [name, check] : outcome.report.checks) {
      if (!check.ran) continue;
      std::printf("%-14s %s  %s\n", name.c_str(), check.passed ? "PASS" : "FAIL",
                  check.detail.c_str());
    }
    if (!outcome.error.empty()) std::fprintf(stderr, "error: %s\n", outcome.error.c_str());
    const std::string report_path =
        out.empty()
            ? std::filesystem::path(path).replace_extension(".report.json").string()
            : out;
    std::printf("report: %s  (%.2fs)\n", report_path.c_str(),
                outcome.report.wall_seconds);
    return outcome.exit_code;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", error_code_name(e.code()), e.what());
    return exit_code_for(e.code());
  }
}

int cmd_batch(const std::string& dir, const std::string& out, int threads) {
  try {
    const std::string table = out.empty() ? "table.csv" : out;
    const int code = run_batch(dir, table, threads);
    std::printf("table: %s\n", table.c_str());
    return code;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", error_code_name(e.code()), e.what());
    return exit_code_for(e.code());
  }
}

int cmd_mesh(const std::string& path, const std::string& out, const std::string& fields,
             int resolution) {
  try {
    const Scenario sc = load_scenario(path);
    const std::string obj = out.empty() ? sc.name + ".obj" : out;
    export_scenario_mesh(sc, obj, fields, resolution);
    std::printf("mesh: %s\n", obj.c_str());
    if (!fields.empty()) std::printf("fields: %s\n", fields.c_str());
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", error_code_name(e.code()), e.what());
    return exit_code_for(e.code());
  }
}

int cmd_gauge_check(const std::string& path, int resolution) {
  try {
    const Scenario sc = load_scenario(path);
    const int res = resolution > 0 ? resolution : (sc.dimension == 2 ? 256 : 64);
    const double margin = sc.gauge->convexity_margin(res);
    double worst_dual = 0.0;
    double worst_support = 0.0;
    for (const Vector& z : quasi_uniform_directions(sc.dimension, 512)) {
      const Vector phi = sc.gauge->cahn_hoffman(z);
      worst_dual = std::max(worst_dual, std::abs(sc.gauge->dual(phi) - 1.0));
      worst_support = std::max(worst_support, std::abs(phi.dot(z) - (*sc.gauge)(z)));
    }
    std::printf("convexity margin (resolution %d): %.6e\n", res, margin);
    std::printf("max |F*(Phi(z)) - 1|: %.3e\n", worst_dual);
    std::printf("max |<Phi(z), z> - F(z)|: %.3e\n", worst_support);
    std::printf("gauge: %s\n", margin > 0.0 ? "admissible" : "NOT admissible");
    return margin > 0.0 ? 0 : 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", error_code_name(e.code()), e.what());
    return exit_code_for(e.code());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic-geometry scenario runner"};
  app.require_subcommand(1);

  std::string path, out;
  std::vector<std::string> checks;
  int resolution = 0;
  int threads = 1;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "run a scenario and write its report");
  run->add_option("scenario", path, "scenario JSON file")->required();
  run->add_option("--check", checks, "run only these checks");
  run->add_option("--resolution", resolution, "override the scenario resolution");
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--threads", threads, "internal parallelism bound");
  run->add_option("--out", out, "report path (default: next to the input)");

  auto* batch = app.add_subcommand("batch", "run every scenario in a directory");
  std::string dir, table_out;
  int batch_threads = 1;
  batch->add_option("dir", dir, "directory of scenario JSON files")->required();
  batch->add_option("--out", table_out, "CSV table path (default table.csv)");
  batch->add_option("--threads", batch_threads, "scenarios run in parallel");

  auto* mesh = app.add_subcommand("mesh", "export the sampled surface");
  std::string mesh_path, mesh_out, mesh_fields;
  int mesh_resolution = 0;
  mesh->add_option("scenario", mesh_path, "scenario JSON file")->required();
  mesh->add_option("--out", mesh_out, "OBJ path (default <name>.obj)");
  mesh->add_option("--fields", mesh_fields, "per-sample scalar fields CSV path");
  mesh->add_option("--resolution", mesh_resolution, "override the scenario resolution");

  auto* gauge = app.add_subcommand("gauge-check", "validate a scenario's gauge");
  std::string gauge_path;
  int gauge_resolution = 0;
  gauge->add_option("scenario", gauge_path, "scenario JSON file")->required();
  gauge->add_option("--resolution", gauge_resolution, "convexity grid resolution");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return cmd_run(path, checks, resolution,
                   seed_opt->count() > 0 ? std::optional<std::uint64_t>(seed) : std::nullopt,
                   threads, out);
  if (batch->parsed()) return cmd_batch(dir, table_out, batch_threads);
  if (mesh->parsed()) return cmd_mesh(mesh_path, mesh_out, mesh_fields, mesh_resolution);
  if (gauge->parsed()) return cmd_gauge_check(gauge_path, gauge_resolution);
  return 2;
}
