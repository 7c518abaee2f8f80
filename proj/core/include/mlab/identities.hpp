#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlab/curvature.hpp"
#include "mlab/quadrature.hpp"
#include "mlab/weights.hpp"

namespace mlab {

enum class Verdict { Pass, Fail, HypothesisViolation };
std::string to_string(Verdict v);

struct NamedValue {
  std::string name;
  std::vector<double> value;  // one entry for scalar identities
};

struct IdentityReport {
  std::string identity_id;
  std::string surface;
  nlohmann::json params = nlohmann::json::object();
  int k = 0;
  std::string f;
  std::string field;
  std::string variant;
  std::vector<double> lhs;
  std::vector<NamedValue> rhs_terms;
  double residual = 0.0;
  double relative_residual = 0.0;
  // How relative_residual was normalised: "sum" = |lhs| + sum|rhs| + 1,
  // "area" = surface area.
  std::string normalization = "sum";
  double tolerance = 0.0;
  std::vector<int> resolution;
  std::vector<double> refinement;  // relative residual per refinement level
  bool monotone = true;
  Verdict verdict = Verdict::Fail;
  std::string note;
};

struct ChainReport {
  std::string chain_id;
  std::string surface;
  nlohmann::json params = nlohmann::json::object();
  int k = 0;
  std::vector<double> values;
  std::vector<double> slacks;  // (v_{i+1} - v_i) / max(|v_i|, |v_{i+1}|)
  double min_slack = 0.0;
  bool equality_flag = false;
  double tolerance = 0.0;
  std::vector<int> resolution;
  Verdict verdict = Verdict::Fail;
  std::string note;
};

struct IdentityOptions {
  QuadratureSpec quadrature;
  Execution exec;
  double tol = 1e-7;
  // Chains: slacks above -slack_tol pass, |slack| < slack_tol flags equality.
  double slack_tol = 1e-9;
  // Evaluate at quarter/half/full resolution and demand a non-increasing
  // residual (below a roundoff floor of 1e-12 any order is accepted).
  bool refine = true;
  // Use the closed-form gradient term for f(r) and f(u) weights instead of
  // the differentiated weight.
  bool closed_form = false;
};

inline constexpr double kRefinementFloor = 1e-12;

// int alpha f sigma_k = int f sigma_{k+1} nu.Y - c int <T_k grad f, Y^T>,
// c = 1 / ((m - k) C(m, k)). Hypersurfaces take any 0 <= k <= m-1; higher
// codimension takes even k with sigma_{k+1}.Y contracted through the normals.
IdentityReport hm_identity(const Immersion& imm, const ConformalField& field,
                           const WeightSpec& f, int k, const IdentityOptions& opts = {});

// Multi-normal version with parallel normals nu_{i_1}..nu_{i_k}; k is the
// number of listed normals. Non-parallel normals raise PreconditionError.
IdentityReport hm_multi_normal(const Immersion& imm, const std::vector<int>& normals,
                               const ConformalField& field, const WeightSpec& f,
                               const IdentityOptions& opts = {});

// int sigma_k nu = 0 for closed hypersurfaces of flat space; the verdict
// compares max |component| with tol * Area.
IdentityReport closure(const Immersion& imm, int k, const IdentityOptions& opts = {});

// (1/n) int Y.nu = int_Omega alpha for the region bounded by an embedded
// hypersurface (its volume for the position field).
double weighted_volume(const Immersion& imm, const ConformalField& field,
                       const IdentityOptions& opts = {});

// Inequality chains: euclid_area (with exponent p), euclid_volume,
// sphere_tan, sphere_sin, sphere_volume, hyper_area, hyper_volume.
ChainReport chain(const Immersion& imm, const std::string& variant, int k, double p = 0.0,
                  const IdentityOptions& opts = {});
const std::vector<std::string>& chain_variants();

// int f sigma_k X + mu int f sigma_{k+1} nu - mu c int T_k(grad f) = 0 in R^{p,q}.
IdentityReport pseudo_sphere_vector_identity(const Immersion& imm, const WeightSpec& f, int k,
                                             const IdentityOptions& opts = {});

// Symmetric (1,1) tensors fed to the divergence formula.
struct TensorSpec {
  std::string kind = "T1";  // T0, T1, T2, ..., "metric", "random"
  unsigned seed = 7;
};

// Integral of the four-term expansion of div(f T(X^T)), which vanishes on a
// closed surface. The verdict compares |integral| with tol * Area.
IdentityReport divergence_residual(const Immersion& imm, const TensorSpec& tensor,
                                   const WeightSpec& f, const ConformalField& field,
                                   const IdentityOptions& opts = {});

double surface_area(const Immersion& imm, const QuadratureSpec& q = {}, const Execution& exec = {});

}  // namespace mlab
