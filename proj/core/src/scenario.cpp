#include "mlab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "mlab/builtins.hpp"
#include "mlab/mesh.hpp"
#include "mlab/report.hpp"
#include "mlab/rigidity.hpp"
#include "mlab/spectral.hpp"
#include "mlab/weights.hpp"

namespace mlab {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = {
      "hm_identity", "hm_multi_normal", "closure", "chain",   "vector_identity",
      "divergence_residual", "rigidity_probe", "lambda1", "garay", "steklov"};
  return ids;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string type_name(const json& j) {
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  return j.type_name();
}

// Typed access to one JSON object with unknown-key rejection.
class Fields {
 public:
  Fields(const json* j, std::string ptr, std::initializer_list<const char*> allowed)
      : j_(j), ptr_(std::move(ptr)) {
    if (!j_) return;
    if (!j_->is_object()) throw ScenarioError(ptr_, "expected an object, got " + type_name(*j_));
    for (const auto& [key, value] : j_->items()) {
      (void)value;
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) {
        std::string names;
        for (const char* a : allowed) names += (names.empty() ? "" : ", ") + std::string(a);
        throw ScenarioError(at(key), "unknown key '" + key + "' (allowed: " + names + ")");
      }
    }
  }

  std::string at(const std::string& key) const { return ptr_ + "/" + escape_token(key); }
  const std::string& pointer() const { return ptr_; }
  bool has(const std::string& key) const { return j_ && j_->contains(key); }
  const json* get(const std::string& key) const { return has(key) ? &(*j_)[key] : nullptr; }

  int integer(const std::string& key, int def, int lo, int hi) const {
    if (!has(key)) return def;
    const json& v = (*j_)[key];
    double d = 0.0;
    if (v.is_number_integer()) d = static_cast<double>(v.get<long long>());
    else if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) d = v.get<double>();
    else throw ScenarioError(at(key), "expected an integer, got " + type_name(v));
    if (d < lo || d > hi)
      throw ScenarioError(at(key), "value " + std::to_string(static_cast<long long>(d)) +
                                       " outside [" + std::to_string(lo) + ", " +
                                       std::to_string(hi) + "]");
    return static_cast<int>(d);
  }

  double number(const std::string& key, double def, bool positive = false) const {
    if (!has(key)) return def;
    const json& v = (*j_)[key];
    if (!v.is_number()) throw ScenarioError(at(key), "expected a number, got " + type_name(v));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(at(key), "expected a finite number");
    if (positive && !(d > 0.0)) throw ScenarioError(at(key), "expected a positive number");
    return d;
  }

  bool boolean(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const json& v = (*j_)[key];
    if (!v.is_boolean()) throw ScenarioError(at(key), "expected a boolean, got " + type_name(v));
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& def, bool required = false) const {
    if (!has(key)) {
      if (required) throw ScenarioError(at(key), "missing required key");
      return def;
    }
    const json& v = (*j_)[key];
    if (!v.is_string()) throw ScenarioError(at(key), "expected a string, got " + type_name(v));
    return v.get<std::string>();
  }

 private:
  const json* j_;
  std::string ptr_;
};

AmbientVector parse_vector(const json& j, const std::string& ptr, int n) {
  if (!j.is_array()) throw ScenarioError(ptr, "expected an array of numbers");
  if (static_cast<int>(j.size()) != n)
    throw ScenarioError(ptr, "expected " + std::to_string(n) + " components, got " +
                                 std::to_string(j.size()));
  AmbientVector v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number())
      throw ScenarioError(ptr + "/" + std::to_string(i), "expected a number");
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

// "default", "position", "polar", or {"kind": ..., "vector": [...]}.
ConformalField parse_field(const json* j, const std::string& ptr, const AmbientSpace& space) {
  if (!j) return default_field(space);
  std::string kind;
  std::optional<AmbientVector> vec;
  if (j->is_string()) {
    kind = j->get<std::string>();
  } else {
    Fields f(j, ptr, {"kind", "vector"});
    kind = f.string("kind", "", true);
    if (const json* v = f.get("vector")) vec = parse_vector(*v, f.at("vector"), space.ambient_dim());
  }
  try {
    if (kind == "default") return default_field(space);
    if (kind == "position") {
      if (!space.is_flat()) throw ScenarioError(ptr, "the position field needs a flat ambient");
      return conformal_field(space, FieldKind::Position);
    }
    if (kind == "polar") {
      if (space.is_flat())
        return conformal_field(space, FieldKind::PolarRadial,
                               vec.value_or(AmbientVector::Zero(space.ambient_dim())));
      return conformal_field(space, FieldKind::PolarRadial, vec.value_or(space.last_axis()));
    }
    if (kind == "constant" || kind == "conformal") {
      if (!vec) throw ScenarioError(ptr + "/vector", "missing required key");
      return conformal_field(space,
                             kind == "constant" ? FieldKind::Constant
                                                : FieldKind::PseudoSphereConformal,
                             *vec);
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError(ptr, e.what());
  }
  throw ScenarioError(ptr, "unknown field kind '" + kind +
                               "' (default, position, polar, constant, conformal)");
}

WeightSpec parse_weight(const Fields& f, const std::string& def) {
  const json* j = f.get("f");
  if (j && j->is_number()) return WeightSpec::constant(j->get<double>());
  const std::string text = f.string("f", def);
  try {
    return WeightSpec::parse(text);
  } catch (const Error& e) {
    throw ScenarioError(f.at("f"), e.what());
  }
}

struct Context {
  AmbientSpace space = AmbientSpace::euclidean(3);
  std::optional<Immersion> surface;
  std::string surface_label;
  json surface_params = json::object();
  QuadratureSpec quadrature;
  bool refine = true;
  fs::path base_dir;
  double tol_scale = 1.0;
  Execution exec;
};

// A validated check, ready to run.
struct Job {
  int index = 0;
  std::string id;
  std::string pointer;
  json parameters;
  std::function<void(CheckOutcome&)> run;
};

const Immersion& need_surface(const Context& ctx) {
  if (!ctx.surface) throw ScenarioError("/surface", "this check needs a surface");
  return *ctx.surface;
}

void fill(CheckOutcome& out, const IdentityReport& r) {
  out.report = to_json(r);
  out.verdict = to_string(r.verdict);
  out.primary_name = "relative_residual";
  out.primary = r.relative_residual;
  out.secondary_name = "residual";
  out.secondary = r.residual;
  out.note = r.note;
}

void fill(CheckOutcome& out, const ChainReport& r) {
  out.report = to_json(r);
  out.verdict = to_string(r.verdict);
  out.primary_name = "min_slack";
  out.primary = r.min_slack;
  out.secondary_name = "equality_flag";
  out.secondary = r.equality_flag ? 1.0 : 0.0;
  out.note = r.note;
}

void fill(CheckOutcome& out, const RigidityProbe& r) {
  out.report = to_json(r);
  out.verdict = to_string(r.verdict);
  out.primary_name = "hypothesis_defect";
  out.primary = r.hypothesis_defect;
  out.secondary_name = "umbilicity_defect";
  out.secondary = r.umbilicity_defect;
  out.note = r.note;
}

void fill(CheckOutcome& out, const EigenReport& r) {
  out.report = to_json(r);
  out.verdict = to_string(r.verdict);
  out.primary_name = "lambda1";
  out.primary = r.lambda1;
  out.secondary_name = "slack";
  out.secondary = r.slack;
  out.note = r.note;
}

IdentityOptions identity_options(const Context& ctx, const Fields& f, double default_tol) {
  IdentityOptions o;
  o.quadrature = ctx.quadrature;
  o.exec = ctx.exec;
  o.refine = ctx.refine;
  o.tol = f.number("tol", default_tol, true) * ctx.tol_scale;
  return o;
}

int max_k(const Context& ctx) { return ctx.surface ? ctx.surface->m() : 6; }

Job prepare(const json& check, const std::string& ptr, const Context& ctx) {
  Fields entry(&check, ptr, {"check_id", "parameters"});
  Job job;
  job.pointer = ptr;
  job.id = entry.string("check_id", "", true);
  if (!contains(check_ids(), job.id))
    throw ScenarioError(entry.at("check_id"),
                        "unknown check_id '" + job.id + "' (" + join(check_ids()) + ")");
  const json empty = json::object();
  const json& params = entry.has("parameters") ? check["parameters"] : empty;
  job.parameters = params;
  const std::string pp = ptr + "/parameters";
  const std::string& id = job.id;

  if (id == "hm_identity") {
    Fields f(&params, pp, {"k", "f", "field", "closed_form", "tol"});
    const Immersion& imm = need_surface(ctx);
    const int k = f.integer("k", 0, 0, imm.m() - 1);
    const WeightSpec w = parse_weight(f, "1");
    const ConformalField field = parse_field(f.get("field"), f.at("field"), ctx.space);
    IdentityOptions o = identity_options(ctx, f, 1e-7);
    o.closed_form = f.boolean("closed_form", false);
    job.run = [imm, k, w, field, o](CheckOutcome& out) { fill(out, hm_identity(imm, field, w, k, o)); };
  } else if (id == "hm_multi_normal") {
    Fields f(&params, pp, {"normals", "f", "field", "tol"});
    const Immersion& imm = need_surface(ctx);
    const json* nj = f.get("normals");
    if (!nj) throw ScenarioError(f.at("normals"), "missing required key");
    if (!nj->is_array() || nj->empty())
      throw ScenarioError(f.at("normals"), "expected a non-empty array of normal indices");
    std::vector<int> normals;
    for (std::size_t i = 0; i < nj->size(); ++i) {
      const json& v = (*nj)[i];
      const std::string at = f.at("normals") + "/" + std::to_string(i);
      if (!v.is_number_integer()) throw ScenarioError(at, "expected an integer");
      const int n = v.get<int>();
      if (n < 0 || n >= std::max(imm.codim(), 1))
        throw ScenarioError(at, "normal index out of range for codimension " +
                                    std::to_string(imm.codim()));
      normals.push_back(n);
    }
    const WeightSpec w = parse_weight(f, "1");
    const ConformalField field = parse_field(f.get("field"), f.at("field"), ctx.space);
    const IdentityOptions o = identity_options(ctx, f, 1e-8);
    job.run = [imm, normals, w, field, o](CheckOutcome& out) {
      fill(out, hm_multi_normal(imm, normals, field, w, o));
    };
  } else if (id == "closure") {
    Fields f(&params, pp, {"k", "tol"});
    const Immersion& imm = need_surface(ctx);
    const int k = f.integer("k", 0, 0, imm.m());
    const IdentityOptions o = identity_options(ctx, f, 1e-8);
    job.run = [imm, k, o](CheckOutcome& out) { fill(out, closure(imm, k, o)); };
  } else if (id == "chain") {
    Fields f(&params, pp, {"variant", "k", "p", "tol"});
    const Immersion& imm = need_surface(ctx);
    const std::string variant = f.string("variant", "", true);
    if (!contains(chain_variants(), variant))
      throw ScenarioError(f.at("variant"),
                          "unknown chain variant '" + variant + "' (" + join(chain_variants()) + ")");
    const int k = f.integer("k", 1, 0, imm.m());
    const double p = f.number("p", 0.0);
    IdentityOptions o = identity_options(ctx, f, 1e-7);
    o.slack_tol = f.number("tol", 1e-9, true) * ctx.tol_scale;
    job.run = [imm, variant, k, p, o](CheckOutcome& out) { fill(out, chain(imm, variant, k, p, o)); };
  } else if (id == "vector_identity") {
    Fields f(&params, pp, {"k", "f", "tol"});
    const Immersion& imm = need_surface(ctx);
    const int k = f.integer("k", 0, 0, imm.m() - 1);
    const WeightSpec w = parse_weight(f, "1");
    const IdentityOptions o = identity_options(ctx, f, 1e-7);
    job.run = [imm, k, w, o](CheckOutcome& out) {
      fill(out, pseudo_sphere_vector_identity(imm, w, k, o));
    };
  } else if (id == "divergence_residual") {
    Fields f(&params, pp, {"tensor", "seed", "f", "field", "tol"});
    const Immersion& imm = need_surface(ctx);
    TensorSpec t;
    t.kind = f.string("tensor", "T1");
    t.seed = static_cast<unsigned>(f.integer("seed", 7, 0, 1 << 30));
    const bool newton = t.kind.size() >= 2 && t.kind[0] == 'T' &&
                        std::all_of(t.kind.begin() + 1, t.kind.end(), [](char c) {
                          return c >= '0' && c <= '9';
                        });
    if (!newton && t.kind != "metric" && t.kind != "random")
      throw ScenarioError(f.at("tensor"), "unknown tensor '" + t.kind + "' (T<k>, metric, random)");
    if (newton && std::stoi(t.kind.substr(1)) > imm.m())
      throw ScenarioError(f.at("tensor"), "Newton tensor order exceeds the surface dimension");
    const WeightSpec w = parse_weight(f, "1");
    const ConformalField field = parse_field(f.get("field"), f.at("field"), ctx.space);
    const IdentityOptions o = identity_options(ctx, f, 1e-8);
    job.run = [imm, t, w, field, o](CheckOutcome& out) {
      fill(out, divergence_residual(imm, t, w, field, o));
    };
  } else if (id == "rigidity_probe") {
    Fields f(&params, pp, {"variant", "k", "l", "f", "field", "eps_h", "eps_u"});
    const Immersion& imm = need_surface(ctx);
    const std::string variant = f.string("variant", "", true);
    if (!contains(probe_variants(), variant))
      throw ScenarioError(f.at("variant"),
                          "unknown probe variant '" + variant + "' (" + join(probe_variants()) + ")");
    const int k = f.integer("k", 1, 0, imm.m());
    const int l = f.integer("l", 1, 0, imm.m());
    const WeightSpec w = parse_weight(f, "1");
    const ConformalField field = parse_field(f.get("field"), f.at("field"), ctx.space);
    RigidityOptions o;
    o.quadrature = ctx.quadrature;
    o.exec = ctx.exec;
    o.eps_h = f.number("eps_h", 1e-7, true) * ctx.tol_scale;
    o.eps_u = f.number("eps_u", 1e-6, true) * ctx.tol_scale;
    job.run = [imm, variant, k, l, w, field, o](CheckOutcome& out) {
      fill(out, variant == "koh" ? koh_probe(imm, field, o)
                                 : alexandrov_probe(imm, w, k, variant, l, o));
    };
  } else if (id == "lambda1") {
    Fields f(&params, pp, {"k", "vertices", "richardson", "mesh"});
    SpectralOptions o;
    o.vertices = f.integer("vertices", 10000, 64, 2000000);
    o.richardson = f.boolean("richardson", true);
    o.exec = ctx.exec;
    const int k = f.integer("k", 0, 0, max_k(ctx));
    if (const json* mj = f.get("mesh")) {
      Fields mf(mj, f.at("mesh"), {"off", "sidecar"});
      const fs::path off = ctx.base_dir / mf.string("off", "", true);
      const fs::path side = ctx.base_dir / mf.string("sidecar", "", true);
      for (const auto& [p, key] : {std::pair{off, "off"}, std::pair{side, "sidecar"}})
        if (!fs::exists(p)) throw ScenarioError(mf.at(key), "file not found: " + p.string());
      job.run = [off, side, k, o](CheckOutcome& out) {
        fill(out, lambda1(read_off(off.string(), side.string()), k, o));
      };
    } else {
      const Immersion& imm = need_surface(ctx);
      job.run = [imm, k, o](CheckOutcome& out) { fill(out, lambda1(imm, k, o)); };
    }
  } else if (id == "garay") {
    Fields f(&params, pp, {"k", "vertices", "richardson"});
    const Immersion& imm = need_surface(ctx);
    SpectralOptions o;
    o.vertices = f.integer("vertices", 10000, 64, 2000000);
    o.richardson = f.boolean("richardson", true);
    o.exec = ctx.exec;
    const int k = f.integer("k", 0, 0, imm.m() - 1);
    const QuadratureSpec q = ctx.quadrature;
    job.run = [imm, k, o, q](CheckOutcome& out) { fill(out, garay(imm, k, o, q)); };
  } else {  // steklov
    Fields f(&params, pp, {"domain", "rings", "richardson"});
    const int rings = f.integer("rings", 48, 4, 2000);
    const bool richardson = f.boolean("richardson", true);
    StarDomain domain = StarDomain::disk(1.0);
    if (const json* dj = f.get("domain")) {
      try {
        domain = StarDomain::from_json(*dj);
      } catch (const Error& e) {
        throw ScenarioError(f.at("domain"), e.what());
      }
    }
    job.run = [domain, rings, richardson](CheckOutcome& out) {
      fill(out, steklov(domain, rings, richardson));
    };
  }
  return job;
}

std::vector<Job> prepare_all(const json& doc, const fs::path& base_dir, double tol_scale,
                             Context& ctx) {
  Fields top(&doc, "", {"description", "ambient", "surface", "quadrature", "checks", "output"});
  top.string("description", "");
  ctx.base_dir = base_dir;
  ctx.tol_scale = tol_scale;

  std::optional<AmbientSpace> named;
  if (top.has("ambient")) {
    const std::string name = top.string("ambient", "");
    try {
      named = AmbientSpace::parse(name);
    } catch (const Error& e) {
      throw ScenarioError("/ambient", e.what());
    }
  }

  if (const json* sj = top.get("surface")) {
    Fields s(sj, "/surface", {"label", "params"});
    ctx.surface_label = s.string("label", "", true);
    if (const json* pj = s.get("params")) {
      if (!pj->is_object()) throw ScenarioError("/surface/params", "expected an object");
      ctx.surface_params = *pj;
    }
    try {
      ctx.space = named ? *named : default_ambient(ctx.surface_label);
    } catch (const Error& e) {
      throw ScenarioError("/surface/label", e.what());
    }
    try {
      ctx.surface = builtin(ctx.surface_label, ctx.surface_params, ctx.space);
    } catch (const Error& e) {
      throw ScenarioError("/surface", e.what());
    }
  } else if (named) {
    ctx.space = *named;
  }

  Fields q(top.get("quadrature"), "/quadrature", {"interval_nodes", "periodic_nodes", "refine"});
  ctx.quadrature.interval_nodes = q.integer("interval_nodes", 0, 0, 4096);
  ctx.quadrature.periodic_nodes = q.integer("periodic_nodes", 0, 0, 8192);
  for (const char* key : {"interval_nodes", "periodic_nodes"})
    if (q.has(key) && q.integer(key, 0, 0, 8192) < 4 && q.integer(key, 0, 0, 8192) != 0)
      throw ScenarioError(q.at(key), "at least 4 nodes (or 0 for the default)");
  ctx.refine = q.boolean("refine", true);

  Fields out(top.get("output"), "/output", {"dir"});
  out.string("dir", "");

  const json* cj = top.get("checks");
  if (!cj) throw ScenarioError("/checks", "missing required key");
  if (!cj->is_array()) throw ScenarioError("/checks", "expected an array");
  if (cj->empty()) throw ScenarioError("/checks", "at least one check is required");
  if (cj->size() > 99) throw ScenarioError("/checks", "at most 99 checks per scenario");

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cj->size(); ++i) {
    jobs.push_back(prepare((*cj)[i], "/checks/" + std::to_string(i), ctx));
    jobs.back().index = static_cast<int>(i) + 1;
  }
  return jobs;
}

// Errors a scenario author can fix: bad parameters or unmet preconditions.
bool usage_error(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError&) {
    return true;
  } catch (const RangeError&) {
    return true;
  } catch (const SizeError&) {
    return true;
  } catch (const ArgumentError&) {
    return true;
  } catch (const PreconditionError&) {
    return true;
  } catch (const DomainError&) {
    return true;
  } catch (const SignatureError&) {
    return true;
  } catch (...) {
    return false;
  }
}

void execute(const Job& job, const Context& ctx, CheckOutcome& out) {
  out.index = job.index;
  out.check_id = job.id;
  char name[16];
  std::snprintf(name, sizeof name, "%02d_", job.index);
  out.file = name + job.id + ".json";
  std::exception_ptr failure;
  try {
    job.run(out);
  } catch (...) {
    failure = std::current_exception();
  }

  ojson doc;
  doc["schema"] = kReportSchema;
  doc["index"] = job.index;
  doc["check_id"] = job.id;
  doc["ambient"] = ctx.space.name();
  doc["surface"] = ctx.surface ? ojson{{"label", ctx.surface_label},
                                       {"params", ojson::parse(ctx.surface_params.dump())}}
                               : ojson(nullptr);
  doc["parameters"] = ojson::parse(job.parameters.dump());

  if (failure) {
    std::string kind = "numerical";
    std::string message;
    try {
      std::rethrow_exception(failure);
    } catch (const HypothesisViolation& e) {
      kind = "hypothesis";
      message = e.what();
    } catch (const ScenarioError& e) {
      kind = "usage";
      message = e.what();
    } catch (const std::exception& e) {
      message = e.what();
    }
    if (kind == "numerical" && usage_error(failure)) {
      kind = "usage";
      message = job.pointer + ": " + message;
    }
    out.verdict = kind == "hypothesis" ? "hypothesis_violation" : kind == "usage" ? "error" : "fail";
    out.exit_code = kind == "hypothesis" ? kExitHypothesis : kind == "usage" ? kExitUsage : kExitFail;
    out.note = message;
    out.primary = out.secondary = std::nan("");
    doc["verdict"] = out.verdict;
    doc["result"] = nullptr;
    doc["error"] = {{"kind", kind}, {"message", message}};
  } else {
    out.exit_code = out.verdict == "pass"                   ? kExitPass
                    : out.verdict == "hypothesis_violation" ? kExitHypothesis
                                                            : kExitFail;
    doc["verdict"] = out.verdict;
    doc["result"] = out.report;
  }
  out.report = std::move(doc);
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot read scenario file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", "malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

json run_metadata(const fs::path& config, const RunOptions& opts, const RunResult& r) {
  return {{"schema", kReportSchema},
          {"generated_at", timestamp()},
          {"config", config.string()},
          {"threads", opts.threads},
          {"tol_scale", opts.tol_scale},
          {"checks", r.checks.size()},
          {"exit_code", r.exit_code}};
}

}  // namespace

int combine_exit(int a, int b) {
  auto rank = [](int c) { return c == kExitUsage ? 3 : c == kExitFail ? 2 : c == kExitHypothesis ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

Scenario::Scenario(json doc, fs::path base_dir) : doc_(std::move(doc)), base_dir_(std::move(base_dir)) {
  Context ctx;
  prepare_all(doc_, base_dir_, 1.0, ctx);
}

Scenario Scenario::load(const fs::path& path) {
  return Scenario(load_json(path), path.parent_path());
}

std::size_t Scenario::size() const { return doc_.at("checks").size(); }

fs::path Scenario::output_dir() const {
  if (doc_.contains("output") && doc_["output"].contains("dir"))
    return doc_["output"]["dir"].get<std::string>();
  return {};
}

RunResult Scenario::run(const RunOptions& opts) const {
  // Threads go to the check pool first; leftovers parallelize inside checks.
  const int threads = std::max(1, opts.threads);
  const int outer = std::min<int>(threads, static_cast<int>(size()));
  Context ctx;
  ctx.exec.threads = std::max(1, threads / outer);
  const std::vector<Job> jobs = prepare_all(doc_, base_dir_, opts.tol_scale, ctx);

  RunResult result;
  result.checks.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) execute(jobs[i], ctx, result.checks[i]);
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < outer; ++w) pool.emplace_back(worker);
    worker();
  }
  for (const auto& c : result.checks) result.exit_code = combine_exit(result.exit_code, c.exit_code);
  return result;
}

void write_reports(const RunResult& result, const fs::path& dir, const json& metadata) {
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "index,check_id,verdict,primary_name,primary,secondary_name,secondary,note\n";
  for (const auto& c : result.checks) {
    write_text(dir / c.file, c.report.dump(2) + "\n");
    csv << c.index << ',' << csv_field(c.check_id) << ',' << c.verdict << ','
        << csv_field(c.primary_name) << ',' << format_double(c.primary) << ','
        << csv_field(c.secondary_name) << ',' << format_double(c.secondary) << ','
        << csv_field(c.note) << '\n';
  }
  write_text(dir / "reports.csv", csv.str());
  write_text(dir / "metadata.json", metadata.dump(2) + "\n");
}

RunResult run_file(const fs::path& config, const fs::path& out, const RunOptions& opts) {
  RunResult result;
  try {
    const Scenario scenario = Scenario::load(config);
    result = scenario.run(opts);
    fs::path dir = out;
    if (dir.empty()) dir = scenario.output_dir();
    if (dir.empty()) dir = "minkowski-lab-out";
    write_reports(result, dir, run_metadata(config, opts, result));
  } catch (const ScenarioError& e) {
    result = {};
    result.exit_code = kExitUsage;
    result.message = e.what();
  }
  return result;
}

RunResult sweep_file(const fs::path& config, const std::string& axis,
                     const std::vector<double>& values, const fs::path& out,
                     const RunOptions& opts) {
  RunResult total;
  try {
    const json base = load_json(config);
    json::json_pointer ptr;
    try {
      ptr = json::json_pointer(axis);
    } catch (const json::exception& e) {
      throw ScenarioError(axis, std::string("invalid JSON pointer: ") + e.what());
    }
    if (!base.contains(ptr) || !base.at(ptr).is_number())
      throw ScenarioError(axis, "sweep axis must address an existing numeric field");
    if (values.empty()) throw ScenarioError(axis, "no sweep values");
    const bool integral = base.at(ptr).is_number_integer();

    // Validate every variant before running any of them.
    std::vector<Scenario> scenarios;
    for (double v : values) {
      json doc = base;
      if (integral && std::floor(v) == v) doc[ptr] = static_cast<long long>(v);
      else doc[ptr] = v;
      scenarios.emplace_back(std::move(doc), config.parent_path());
    }

    fs::path dir = out.empty() ? scenarios.front().output_dir() : out;
    if (dir.empty()) dir = "minkowski-lab-out";
    struct Row {
      double value;
      const CheckOutcome* check;
    };
    std::vector<RunResult> runs;
    runs.reserve(values.size());
    std::vector<std::string> columns;
    for (std::size_t i = 0; i < values.size(); ++i) {
      runs.push_back(scenarios[i].run(opts));
      char sub[32];
      std::snprintf(sub, sizeof sub, "value_%02zu", i + 1);
      write_reports(runs.back(), dir / sub, run_metadata(config, opts, runs.back()));
      total.exit_code = combine_exit(total.exit_code, runs.back().exit_code);
      for (const auto& c : runs.back().checks) {
        const auto& res = c.report["result"];
        if (!res.is_object()) continue;
        for (const auto& [key, val] : res.items())
          if ((val.is_number() || val.is_boolean()) && !contains(columns, key)) columns.push_back(key);
      }
    }

    std::ostringstream csv;
    csv << "value,index,check_id,verdict";
    for (const auto& c : columns) csv << ',' << csv_field(c);
    csv << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (const auto& c : runs[i].checks) {
        csv << format_double(values[i]) << ',' << c.index << ',' << c.check_id << ',' << c.verdict;
        const auto& res = c.report["result"];
        for (const auto& col : columns) {
          csv << ',';
          if (!res.is_object() || !res.contains(col)) continue;
          const auto& v = res[col];
          if (v.is_boolean()) csv << (v.get<bool>() ? 1 : 0);
          else if (v.is_number_integer()) csv << v.get<long long>();
          else if (v.is_number()) csv << format_double(v.get<double>());
        }
        csv << '\n';
      }
      for (auto& c : runs[i].checks) total.checks.push_back(std::move(c));
    }
    write_text(dir / "sweep.csv", csv.str());
    json meta = run_metadata(config, opts, total);
    meta["axis"] = axis;
    meta["values"] = values;
    write_text(dir / "metadata.json", meta.dump(2) + "\n");
  } catch (const ScenarioError& e) {
    total = {};
    total.exit_code = kExitUsage;
    total.message = e.what();
  }
  return total;
}

std::string list_checks() {
  std::ostringstream os;
  os << "checks (parameters with defaults; tolerances are scaled by --tol-scale)\n"
     << "  hm_identity          k=0 f=\"1\" field=default closed_form=false tol=1e-7\n"
     << "  hm_multi_normal      normals=[...] f=\"1\" field=default tol=1e-8\n"
     << "  closure              k=0 tol=1e-8\n"
     << "  chain                variant=<" << join(chain_variants()) << "> k=1 p=0 tol=1e-9\n"
     << "  vector_identity      k=0 f=\"1\" tol=1e-7\n"
     << "  divergence_residual  tensor=T1|T<k>|metric|random seed=7 f=\"1\" field=default tol=1e-8\n"
     << "  rigidity_probe       variant=<" << join(probe_variants())
     << "> k=1 l=1 f=\"1\" field=default eps_h=1e-7 eps_u=1e-6\n"
     << "  lambda1              k=0 vertices=10000 richardson=true mesh={off, sidecar}\n"
     << "  garay                k=0 vertices=10000 richardson=true\n"
     << "  steklov              domain={shape: disk|ellipse|fourier, ...} rings=48 richardson=true\n"
     << "fields: default, position, polar, {kind: position|polar|constant|conformal, vector: [...]}\n"
     << "weights: 1, 2.5, r, r^2, u, exp(u), x1, t1, sin(r), cosh(r), ...\n";
  return os.str();
}

std::string list_surfaces() {
  std::ostringstream os;
  os << "surfaces (label, ambients, parameters)\n";
  for (const auto& s : builtin_surfaces()) {
    os << "  " << s.label;
    for (std::size_t pad = s.label.size(); pad < 20; ++pad) os << ' ';
    os << ' ' << s.ambients << "  " << s.params << '\n';
  }
  return os.str();
}

}  // namespace mlab
