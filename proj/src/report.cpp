#include "wulffkit/report.hpp"

#include <json.hpp>

#include <cstdio>

namespace wulffkit {

using nlohmann::json;

namespace {

json tolerances_to_json(const ReportTolerances& t) {
  json j;
  j["admissibility"] = t.admissibility;
  j["hk_slack"] = t.hk_slack;
  j["minkowski"] = t.minkowski;
  j["minkowski_consistency"] = t.minkowski_consistency;
  j["chain_slack"] = t.chain_slack;
  j["sweep_closed"] = t.sweep_closed;
  j["equality_epsilon"] = t.equality_epsilon;
  j["coverage_touch"] = t.coverage_touch;
  j["touch_reconstruction"] = t.touch_reconstruction;
  return j;
}

ReportTolerances tolerances_from_json(const json& j) {
  ReportTolerances t;
  t.admissibility = j.at("admissibility").get<double>();
  t.hk_slack = j.at("hk_slack").get<double>();
  t.minkowski = j.at("minkowski").get<double>();
  t.minkowski_consistency = j.at("minkowski_consistency").get<double>();
  t.chain_slack = j.at("chain_slack").get<double>();
  t.sweep_closed = j.at("sweep_closed").get<double>();
  t.equality_epsilon = j.at("equality_epsilon").get<double>();
  t.coverage_touch = j.at("coverage_touch").get<double>();
  t.touch_reconstruction = j.at("touch_reconstruction").get<double>();
  return t;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& arr) {
  Vector v(static_cast<int>(arr.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = arr.at(i).get<double>();
  return v;
}

}  // namespace

bool VerificationReport::all_passed() const {
  for (const auto& [name, outcome] : checks)
    if (outcome.ran && !outcome.passed) return false;
  return true;
}

std::string report_to_json(const VerificationReport& r) {
  json j;
  j["version"] = r.version;
  j["name"] = r.name;
  j["dimension"] = r.dimension;
  j["resolution"] = r.resolution;
  j["seed"] = r.seed;
  if (r.area) j["area"] = *r.area;
  if (r.volume) j["volume"] = *r.volume;
  if (r.hk_functional) j["hk_functional"] = *r.hk_functional;
  if (r.hk_ratio) j["hk_ratio"] = *r.hk_ratio;
  if (r.sweep_volume) j["sweep_volume"] = *r.sweep_volume;
  if (r.minkowski_residual) j["minkowski_residual"] = *r.minkowski_residual;
  if (r.minkowski_raw) j["minkowski_raw"] = *r.minkowski_raw;
  if (r.minkowski_boundary_form) j["minkowski_boundary_form"] = *r.minkowski_boundary_form;
  if (r.coverage_fraction) j["coverage_fraction"] = *r.coverage_fraction;
  if (r.coverage_witnesses) j["coverage_witnesses"] = *r.coverage_witnesses;
  if (r.min_mean_curvature) j["min_mean_curvature"] = *r.min_mean_curvature;
  if (r.max_mean_curvature) j["max_mean_curvature"] = *r.max_mean_curvature;
  if (r.admissibility) {
    json a;
    a["max_normal_product"] = r.admissibility->max_anisotropic_normal_product;
    a["max_edge_normal_product"] = r.admissibility->max_edge_normal_product;
    a["free_boundary_residual"] = r.admissibility->free_boundary_residual;
    a["transversality_margin"] = r.admissibility->transversality_margin;
    a["conormal_alignment_residual"] = r.admissibility->conormal_alignment_residual;
    a["regular_samples"] = r.admissibility->regular_samples;
    a["edge_samples"] = r.admissibility->edge_samples;
    j["admissibility"] = a;
  }
  if (r.equality) {
    json e;
    e["flagged"] = r.equality->flagged;
    e["ratio"] = r.equality->ratio;
    e["epsilon"] = r.equality->epsilon;
    e["umbilicity_residual"] = r.equality->umbilicity_residual;
    e["center_estimate"] = vector_to_json(r.equality->center_estimate);
    e["wulff_residual"] = r.equality->wulff_residual;
    e["boundary_contact"] = r.equality->boundary_contact;
    e["center_on_singular_set"] = r.equality->center_on_singular_set;
    e["wetted_cone_consistent"] = r.equality->wetted_cone_consistent;
    j["equality"] = e;
  }
  j["tolerances"] = tolerances_to_json(r.tolerances);
  json checks;
  for (const auto& [name, outcome] : r.checks) {
    json c;
    c["ran"] = outcome.ran;
    c["passed"] = outcome.passed;
    c["detail"] = outcome.detail;
    checks[name] = c;
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid report JSON: ") + e.what());
  }
  VerificationReport r;
  if (!j.contains("version") || !j.at("version").is_number_integer())
    fail(ErrorCode::ParseError, "report lacks an integer schema version");
  r.version = j.at("version").get<int>();
  if (r.version != 1)
    fail(ErrorCode::ParseError,
         "unsupported report schema version " + std::to_string(r.version));
  try {
    r.name = j.at("name").get<std::string>();
    r.dimension = j.at("dimension").get<int>();
    r.resolution = j.at("resolution").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto opt = [&](const char* key) -> std::optional<double> {
      if (j.contains(key)) return j.at(key).get<double>();
      return std::nullopt;
    };
    r.area = opt("area");
    r.volume = opt("volume");
    r.hk_functional = opt("hk_functional");
    r.hk_ratio = opt("hk_ratio");
    r.sweep_volume = opt("sweep_volume");
    r.minkowski_residual = opt("minkowski_residual");
    r.minkowski_raw = opt("minkowski_raw");
    r.minkowski_boundary_form = opt("minkowski_boundary_form");
    r.coverage_fraction = opt("coverage_fraction");
    if (j.contains("coverage_witnesses"))
      r.coverage_witnesses = j.at("coverage_witnesses").get<int>();
    r.min_mean_curvature = opt("min_mean_curvature");
    r.max_mean_curvature = opt("max_mean_curvature");
    if (j.contains("admissibility")) {
      const json& a = j.at("admissibility");
      AdmissibilityReport rep;
      rep.max_anisotropic_normal_product = a.at("max_normal_product").get<double>();
      rep.max_edge_normal_product = a.at("max_edge_normal_product").get<double>();
      rep.free_boundary_residual = a.at("free_boundary_residual").get<double>();
      rep.transversality_margin = a.at("transversality_margin").get<double>();
      rep.conormal_alignment_residual = a.at("conormal_alignment_residual").get<double>();
      rep.regular_samples = a.at("regular_samples").get<int>();
      rep.edge_samples = a.at("edge_samples").get<int>();
      r.admissibility = rep;
    }
    if (j.contains("equality")) {
      const json& e = j.at("equality");
      EqualityDiagnosis diag;
      diag.flagged = e.at("flagged").get<bool>();
      diag.ratio = e.at("ratio").get<double>();
      diag.epsilon = e.at("epsilon").get<double>();
      diag.umbilicity_residual = e.at("umbilicity_residual").get<double>();
      diag.center_estimate = vector_from_json(e.at("center_estimate"));
      diag.wulff_residual = e.at("wulff_residual").get<double>();
      diag.boundary_contact = e.at("boundary_contact").get<std::string>();
      diag.center_on_singular_set = e.at("center_on_singular_set").get<bool>();
      diag.wetted_cone_consistent = e.at("wetted_cone_consistent").get<bool>();
      r.equality = diag;
    }
    r.tolerances = tolerances_from_json(j.at("tolerances"));
    for (const auto& [name, c] : j.at("checks").items()) {
      CheckOutcome outcome;
      outcome.ran = c.at("ran").get<bool>();
      outcome.passed = c.at("passed").get<bool>();
      outcome.detail = c.at("detail").get<std::string>();
      r.checks[name] = outcome;
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
  }
  return r;
}

namespace {

std::string fmt(const std::optional<double>& v) {
  if (!v) return "";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", *v);
  return buffer;
}

}  // namespace

std::string report_csv_header() {
  return "name,status,dimension,resolution,seed,area,volume,hk_functional,hk_ratio,"
         "sweep_volume,minkowski_residual,coverage_fraction,coverage_witnesses,"
         "free_boundary_residual,max_normal_product,equality_flagged,umbilicity_residual,"
         "boundary_contact";
}

std::string report_csv_row(const VerificationReport& r, const std::string& status) {
  std::string row = r.name + "," + status + "," + std::to_string(r.dimension) + "," +
                    std::to_string(r.resolution) + "," + std::to_string(r.seed);
  row += "," + fmt(r.area);
  row += "," + fmt(r.volume);
  row += "," + fmt(r.hk_functional);
  row += "," + fmt(r.hk_ratio);
  row += "," + fmt(r.sweep_volume);
  row += "," + fmt(r.minkowski_residual);
  row += "," + fmt(r.coverage_fraction);
  row += "," + (r.coverage_witnesses ? std::to_string(*r.coverage_witnesses) : "");
  row += "," + fmt(r.admissibility
                       ? std::optional<double>(r.admissibility->free_boundary_residual)
                       : std::nullopt);
  row += "," + fmt(r.admissibility
                       ? std::optional<double>(r.admissibility->max_anisotropic_normal_product)
                       : std::nullopt);
  row += ",";
  row += r.equality ? (r.equality->flagged ? "true" : "false") : "";
  row += "," + fmt(r.equality ? std::optional<double>(r.equality->umbilicity_residual)
                              : std::nullopt);
  row += ",";
  row += r.equality ? r.equality->boundary_contact : "";
  return row;
}

}  // namespace wulffkit
