#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mlab/identities.hpp"

namespace mlab {

// Defect report for an Alexandrov-type statement "quantity constant implies
// umbilic". A probe only checks consistency on an instance; it proves nothing.
struct RigidityProbe {
  std::string variant;
  std::string surface;
  nlohmann::json params = nlohmann::json::object();
  int k = 0;
  int l = 0;
  std::string f;
  double hypothesis_defect = 0.0;
  double umbilicity_defect = 0.0;
  double sigma1_oscillation = 0.0;      // filled by koh_probe
  std::vector<double> center_estimate;  // empty on de Sitter space
  bool hypothesis_met = false;          // hypothesis_defect < eps_h
  double eps_h = 1e-7;
  double eps_u = 1e-6;
  std::vector<int> resolution;
  Verdict verdict = Verdict::Fail;
  std::string note;
};

struct RigidityOptions {
  QuadratureSpec quadrature;
  Execution exec;
  double eps_h = 1e-7;
  double eps_u = 1e-6;
};

// (max - min) / (|mean| + 1e-300).
double oscillation(const std::vector<double>& values);
double oscillation(const Immersion& imm, const std::function<double(const PointFrame&)>& quantity,
                   const QuadratureSpec& q = {}, const Execution& exec = {});

// Variants: "alex_r" (sigma_k f(r)), "alex_u" (sigma_k f(u), convex surfaces),
// "alex2" (f(r) sigma_k / sigma_l), "alex3" (f(r) sigma_k / sigma_l on dS_n).
RigidityProbe alexandrov_probe(const Immersion& imm, const WeightSpec& f, int k,
                               const std::string& variant, int l = 1,
                               const RigidityOptions& opts = {});
const std::vector<std::string>& probe_variants();

// sigma_2 / sigma_1 constant in a space form with a field of positive alpha.
RigidityProbe koh_probe(const Immersion& imm, const ConformalField& field,
                        const RigidityOptions& opts = {});

struct SweepRow {
  double eps = 0.0;
  double hypothesis_defect = 0.0;
  double umbilicity_defect = 0.0;
};
struct SweepTable {
  std::vector<SweepRow> rows;
  bool strictly_increasing = false;  // both columns
};
SweepTable rigidity_sweep(const std::vector<double>& eps,
                          const std::function<RigidityProbe(double)>& probe);

}  // namespace mlab
