#include "mlab/report.hpp"

#include <charconv>
#include <cmath>

namespace mlab {

namespace {

using ojson = nlohmann::ordered_json;

// Non-finite numbers become null in JSON.
ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson nums(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

ojson plain(const nlohmann::json& j) { return ojson::parse(j.dump()); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ojson to_json(const IdentityReport& r) {
  ojson j;
  j["identity_id"] = r.identity_id;
  j["surface"] = r.surface;
  j["params"] = plain(r.params);
  j["k"] = r.k;
  j["f"] = r.f;
  j["field"] = r.field;
  j["variant"] = r.variant;
  j["lhs"] = nums(r.lhs);
  ojson terms = ojson::array();
  for (const auto& t : r.rhs_terms) terms.push_back({{"name", t.name}, {"value", nums(t.value)}});
  j["rhs_terms"] = terms;
  j["residual"] = num(r.residual);
  j["relative_residual"] = num(r.relative_residual);
  j["normalization"] = r.normalization;
  j["tolerance"] = num(r.tolerance);
  j["resolution"] = r.resolution;
  j["refinement"] = nums(r.refinement);
  j["monotone"] = r.monotone;
  j["verdict"] = to_string(r.verdict);
  j["note"] = r.note;
  return j;
}

ojson to_json(const ChainReport& r) {
  ojson j;
  j["chain_id"] = r.chain_id;
  j["surface"] = r.surface;
  j["params"] = plain(r.params);
  j["k"] = r.k;
  j["values"] = nums(r.values);
  j["slacks"] = nums(r.slacks);
  j["min_slack"] = num(r.min_slack);
  j["equality_flag"] = r.equality_flag;
  j["tolerance"] = num(r.tolerance);
  j["resolution"] = r.resolution;
  j["verdict"] = to_string(r.verdict);
  j["note"] = r.note;
  return j;
}

ojson to_json(const RigidityProbe& r) {
  ojson j;
  j["kind"] = "probe";
  j["variant"] = r.variant;
  j["surface"] = r.surface;
  j["params"] = plain(r.params);
  j["k"] = r.k;
  j["l"] = r.l;
  j["f"] = r.f;
  j["hypothesis_defect"] = num(r.hypothesis_defect);
  j["umbilicity_defect"] = num(r.umbilicity_defect);
  j["sigma1_oscillation"] = num(r.sigma1_oscillation);
  j["sphere_center_estimate"] = nums(r.center_estimate);
  j["hypothesis_met"] = r.hypothesis_met;
  j["eps_h"] = num(r.eps_h);
  j["eps_u"] = num(r.eps_u);
  j["resolution"] = r.resolution;
  j["verdict"] = to_string(r.verdict);
  j["note"] = r.note;
  return j;
}

ojson to_json(const EigenReport& r) {
  ojson j;
  j["check"] = r.check;
  j["surface"] = r.surface;
  j["params"] = plain(r.params);
  j["k"] = r.k;
  j["lambda1"] = num(r.lambda1);
  j["coarse_lambda1"] = num(r.coarse_lambda1);
  j["extrapolated"] = num(r.extrapolated);
  j["discretization_error"] = num(r.discretization_error);
  j["lhs"] = num(r.lhs);
  j["rhs"] = num(r.rhs);
  j["bound"] = num(r.bound);
  j["slack"] = num(r.slack);
  j["adjusted_threshold"] = num(r.adjusted_threshold);
  j["raw_pass"] = r.raw_pass;
  j["adjusted_pass"] = r.adjusted_pass;
  j["vertices"] = r.vertices;
  j["mesh_size"] = num(r.mesh_size);
  j["orthogonality"] = num(r.orthogonality);
  j["rayleigh_residual"] = num(r.rayleigh_residual);
  j["iterations"] = r.iterations;
  j["verdict"] = to_string(r.verdict);
  j["note"] = r.note;
  return j;
}

ojson to_json(const SweepTable& t) {
  ojson rows = ojson::array();
  for (const auto& r : t.rows)
    rows.push_back({{"eps", num(r.eps)},
                    {"hypothesis_defect", num(r.hypothesis_defect)},
                    {"umbilicity_defect", num(r.umbilicity_defect)}});
  return {{"rows", rows}, {"strictly_increasing", t.strictly_increasing}};
}

}  // namespace mlab
