#include "wulffkit/scenario.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace wulffkit;

namespace {

namespace fs = std::filesystem;

const char* kSphereScenario = R"({
  "version": 1,
  "name": "mini_sphere",
  "dimension": 3,
  "seed": 7,
  "resolution": 16,
  "coverage_samples": 60,
  "checks": ["hk", "sweep", "coverage", "equality", "touch"],
  "expect_equality": true,
  "gauge": {"family": "isotropic"},
  "surface": {"type": "wulff", "center": [0, 0, 0], "radius": 1.0},
  "container": {"type": "none"}
})";

const char* kHemisphereScenario = R"({
  "version": 1,
  "name": "mini_hemisphere",
  "dimension": 3,
  "seed": 9,
  "resolution": 16,
  "coverage_samples": 60,
  "checks": ["admissibility", "hk", "minkowski", "sweep", "coverage", "equality"],
  "expect_equality": true,
  "gauge": {"family": "isotropic"},
  "surface": {
    "type": "wulff", "center": [0, 0, 0], "radius": 1.0,
    "cutter": {"type": "half_space", "normal": [0, 0, -1], "offset": 0.0}
  },
  "container": {"type": "half_space", "normal": [0, 0, -1], "offset": 0.0}
})";

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("strict parsing") {
  CHECK_NOTHROW(parse_scenario(kSphereScenario));

  // Unknown fields are rejected everywhere.
  std::string bad = kSphereScenario;
  bad.insert(bad.rfind('}'), R"(, "surprise": 1)");
  CHECK_THROWS_AS(parse_scenario(bad), Error);

  std::string bad_gauge = kSphereScenario;
  const auto pos = bad_gauge.find("\"family\": \"isotropic\"");
  bad_gauge.insert(pos, R"("extra": 2, )");
  CHECK_THROWS_AS(parse_scenario(bad_gauge), Error);

  std::string bad_check = kSphereScenario;
  const auto cpos = bad_check.find("\"hk\"");
  bad_check.replace(cpos, 4, "\"hkk\"");
  CHECK_THROWS_AS(parse_scenario(bad_check), Error);

  std::string bad_version = kSphereScenario;
  bad_version.replace(bad_version.find("\"version\": 1"), 12, "\"version\": 3");
  CHECK_THROWS_AS(parse_scenario(bad_version), Error);

  CHECK_THROWS_AS(parse_scenario("not json at all"), Error);

  try {
    parse_scenario("{}");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(exit_code_for(e.code()) == 2);
  }
}

TEST_CASE("run outcomes and exit codes") {
  const Scenario sphere = parse_scenario(kSphereScenario);
  const RunOutcome good = run_scenario(sphere);
  CHECK(good.exit_code == 0);
  CHECK(good.report.all_passed());
  CHECK(*good.report.hk_ratio == doctest::Approx(1.0).epsilon(1e-3));
  // The recorded ratio is exactly functional / ((n+1)/n * volume).
  CHECK(*good.report.hk_ratio ==
        doctest::Approx(*good.report.hk_functional / (1.5 * *good.report.volume))
            .epsilon(1e-14));

  // A wrong expectation turns into a failed check, not a precondition.
  Scenario strict = sphere;
  strict.expect_equality = false;
  const RunOutcome failing = run_scenario(strict);
  CHECK(failing.exit_code == 1);
  CHECK(!failing.report.checks.at("equality").passed);

  // Mean-convexity violations surface as preconditions (exit 3).
  Scenario concave = sphere;
  {
    Vector e3(3);
    e3 << 0, 0, 1;
    concave.patch = SphereMappedPatch::closed_surface(std::make_shared<RadialMap>(
        Vector::Zero(3), 1.0, std::vector<PerturbationTerm>{{3, e3, 0.45}}));
  }
  const RunOutcome precondition = run_scenario(concave);
  CHECK(precondition.exit_code == 3);
  CHECK(!precondition.error.empty());
}

TEST_CASE("reports are byte-identical for identical scenario and seed") {
  const Scenario hemi = parse_scenario(kHemisphereScenario);
  const RunOutcome a = run_scenario(hemi, 1);
  const RunOutcome b = run_scenario(hemi, 2);  // thread count must not matter
  CHECK(a.exit_code == 0);
  CHECK(report_to_json(a.report) == report_to_json(b.report));
}

TEST_CASE("report schema round-trips") {
  const RunOutcome outcome = run_scenario(parse_scenario(kHemisphereScenario));
  const std::string text = report_to_json(outcome.report);
  const VerificationReport parsed = report_from_json(text);
  CHECK(parsed.version == 1);
  CHECK(report_to_json(parsed) == text);
  CHECK_THROWS_AS(report_from_json("{\"version\": 99}"), Error);
}

TEST_CASE("run_scenario_file writes the report next to the input") {
  const fs::path dir = temp_dir("wulffkit_run_test");
  const fs::path scenario_path = dir / "mini.json";
  std::ofstream(scenario_path) << kSphereScenario;
  const RunOutcome outcome = run_scenario_file(scenario_path.string());
  CHECK(outcome.exit_code == 0);
  CHECK(fs::exists(dir / "mini.report.json"));
  const VerificationReport reread = report_from_json(slurp(dir / "mini.report.json"));
  CHECK(reread.name == "mini_sphere");

  // Check overrides narrow the run.
  const RunOutcome only_hk =
      run_scenario_file(scenario_path.string(), 1, "", {"hk"}, 0, {});
  CHECK(only_hk.exit_code == 0);
  CHECK(only_hk.report.checks.size() == 1);
  CHECK(only_hk.report.checks.count("hk") == 1);
}

TEST_CASE("mesh export") {
  const fs::path dir = temp_dir("wulffkit_mesh_test");
  Scenario sc = parse_scenario(kHemisphereScenario);
  const fs::path obj = dir / "hemi.obj";
  const fs::path csv = dir / "fields.csv";
  export_scenario_mesh(sc, obj.string(), csv.string(), 12);
  const std::string obj_text = slurp(obj);
  CHECK(obj_text.find("v ") != std::string::npos);
  CHECK(obj_text.find("f ") != std::string::npos);
  CHECK(obj_text.find("o boundary_0") != std::string::npos);
  CHECK(obj_text.find("\nl ") != std::string::npos);
  const std::string csv_text = slurp(csv);
  CHECK(csv_text.rfind("x,y,z,HF,kappa1,kappa2,F_nu", 0) == 0);

  // Exported Wulff vertices satisfy the dual level-set equation.
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) = 4.0;
  auto ell = std::make_shared<AnisotropyGauge>(AnisotropyGauge::ellipsoidal(m));
  Scenario wsc = sc;
  wsc.gauge = ell;
  wsc.patch = wulff_patch(ell, Vector::Zero(3), 1.0);
  const fs::path wobj = dir / "wulff.obj";
  export_scenario_mesh(wsc, wobj.string(), "", 12);
  std::ifstream in(wobj);
  std::string token;
  int checked = 0;
  while (in >> token) {
    if (token != "v") {
      std::string line;
      std::getline(in, line);
      continue;
    }
    Vector x(3);
    in >> x[0] >> x[1] >> x[2];
    if (checked % 17 == 0) CHECK(std::abs(ell->dual(x) - 1.0) < 1e-6);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("unwritable outputs raise io errors") {
  const Scenario sc = parse_scenario(kSphereScenario);
  CHECK_THROWS_AS(export_scenario_mesh(sc, "/nonexistent_dir/mesh.obj", "", 8), Error);
  try {
    export_scenario_mesh(sc, "/nonexistent_dir/mesh.obj", "", 8);
  } catch (const Error& e) {
    CHECK(exit_code_for(e.code()) == 2);
  }
}

TEST_CASE("batch runs a directory deterministically") {
  const fs::path dir = temp_dir("wulffkit_batch_test");
  std::ofstream(dir / "a_sphere.json") << kSphereScenario;
  std::ofstream(dir / "b_hemisphere.json") << kHemisphereScenario;
  const fs::path table = dir / "table.csv";
  CHECK(run_batch(dir.string(), table.string(), 2) == 0);
  const std::string text = slurp(table);
  CHECK(text.rfind(report_csv_header(), 0) == 0);
  CHECK(text.find("\nmini_sphere,PASS") != std::string::npos);
  CHECK(text.find("\nmini_hemisphere,PASS") != std::string::npos);
  // Deterministic row order: a_ before b_.
  CHECK(text.find("mini_sphere") < text.find("mini_hemisphere"));

  // A malformed file marks its row ERROR and fails the batch.
  std::ofstream(dir / "c_broken.json") << "{ not json";
  CHECK(run_batch(dir.string(), table.string(), 1) == 1);
  CHECK(slurp(table).find("c_broken,ERROR") != std::string::npos);

  const fs::path empty = temp_dir("wulffkit_batch_empty");
  const fs::path empty_table = empty / "table.csv";
  CHECK(run_batch(empty.string(), empty_table.string(), 1) == 0);
  CHECK(slurp(empty_table) == report_csv_header() + "\n");
}

TEST_SUITE_END();
