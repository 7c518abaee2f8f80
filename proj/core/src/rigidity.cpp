#include "mlab/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mlab {

double oscillation(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  return (*hi - *lo) / (std::abs(mean) + 1e-300);
}

double oscillation(const Immersion& imm, const std::function<double(const PointFrame&)>& quantity,
                   const QuadratureSpec& q, const Execution& exec) {
  const QuadratureGrid grid = make_grid(imm, q);
  std::vector<double> values(grid.nodes.size());
  parallel_for(values.size(), exec, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) values[i] = quantity(frame(imm, grid.nodes[i]));
  });
  return oscillation(values);
}

const std::vector<std::string>& probe_variants() {
  static const std::vector<std::string> v = {"alex_r", "alex_u", "alex2", "alex3", "koh"};
  return v;
}

namespace {

struct NodeData {
  std::vector<double> sigma;
  double umbilicity = 0.0;
  double min_lambda = 0.0;
  double f = 1.0;
  double df = 0.0;
  double alpha = 0.0;
  double weight = 0.0;  // quadrature weight times area element
  AmbientVector center;
};

// Pole of the geodesic sphere osculating the surface at this node, read off
// from X and nu along the inward normal geodesic of radius r, cot r = sigma_1
// (or coth r, 1/r).
AmbientVector osculating_center(const AmbientSpace& space, const PointFrame& fr, double s1) {
  const AmbientVector& x = fr.x();
  const AmbientVector& nu = fr.normals[0];
  if (space.is_flat()) return x - nu / s1;
  if (space.is_round_sphere()) {
    const double r = std::atan2(1.0, s1);
    return std::cos(r) * x - std::sin(r) * nu;
  }
  if (space.is_hyperbolic()) {
    const double r = std::atanh(1.0 / s1);
    return std::cosh(r) * x - std::sinh(r) * nu;
  }
  return AmbientVector();
}

std::vector<NodeData> sample(const Immersion& imm, const ConformalField& field, const WeightSpec& f,
                             const QuadratureGrid& grid, const Execution& exec) {
  std::vector<NodeData> out(grid.nodes.size());
  parallel_for(out.size(), exec, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const PointFrame fr = frame(imm, grid.nodes[i]);
      const CurvaturePacket pk = hypersurface_packet(fr);
      const SmallMatrix h = fr.scalar_shape();
      NodeData& d = out[i];
      d.sigma = pk.sigma;
      d.umbilicity = (h - pk.sigma_at(1) * SmallMatrix::Identity(fr.m, fr.m)).norm() / (1.0 + h.norm());
      d.min_lambda = pk.lambdas.minCoeff();
      const WeightSpec::Value fv = f.evaluate(fr, field);
      d.f = fv.f;
      d.df = fv.df;
      d.alpha = field.alpha(fr.x());
      d.weight = grid.weights[i] * fr.sqrt_det_g;
      d.center = osculating_center(imm.ambient(), fr, pk.sigma_at(1));
    }
  });
  return out;
}

void fill_common(RigidityProbe& p, const Immersion& imm, const std::vector<NodeData>& nodes,
                 const std::vector<double>& quantity, const QuadratureGrid& grid,
                 const RigidityOptions& opts) {
  p.surface = imm.label();
  p.params = imm.params();
  p.resolution = grid.resolution;
  p.eps_h = opts.eps_h;
  p.eps_u = opts.eps_u;
  p.hypothesis_defect = oscillation(quantity);
  for (const auto& n : nodes) p.umbilicity_defect = std::max(p.umbilicity_defect, n.umbilicity);
  p.hypothesis_met = p.hypothesis_defect < opts.eps_h;

  const AmbientSpace& space = imm.ambient();
  if (!space.is_de_sitter() && !nodes.empty()) {
    AmbientVector c = AmbientVector::Zero(space.ambient_dim());
    double w = 0.0;
    for (const auto& n : nodes) {
      c += n.weight * n.center;
      w += n.weight;
    }
    c /= w;
    if (!space.is_flat()) c /= std::sqrt(std::abs(space.inner<double>(c, c)));
    p.center_estimate.assign(c.data(), c.data() + c.size());
  }

  if (p.hypothesis_met && !(p.umbilicity_defect < opts.eps_u)) {
    p.verdict = Verdict::Fail;
    p.note = "probe: quantity constant but surface not umbilic";
  } else {
    p.verdict = Verdict::Pass;
    p.note = p.hypothesis_met ? "probe: quantity constant and surface umbilic"
                              : "probe: hypothesis fails (quantity not constant); theorem silent";
  }
}

bool violated(RigidityProbe& p, const std::string& why) {
  p.verdict = Verdict::HypothesisViolation;
  p.note = "probe: " + why;
  return true;
}

}  // namespace

RigidityProbe alexandrov_probe(const Immersion& imm, const WeightSpec& f, int k,
                               const std::string& variant, int l, const RigidityOptions& opts) {
  const auto& names = probe_variants();
  if (variant == "koh" || std::find(names.begin(), names.end(), variant) == names.end())
    throw ConfigError("unknown alexandrov probe variant '" + variant + "'");
  if (imm.codim() != 1) throw SizeError("rigidity probes need a hypersurface");
  const AmbientSpace& space = imm.ambient();
  const int m = imm.m();
  if (k < 1 || k > m) throw RangeError("probe needs 1 <= k <= m");
  const bool ratio = variant == "alex2" || variant == "alex3";
  if (ratio && (l < 0 || l >= k)) throw RangeError("ratio probes need 0 <= l < k");
  if (variant == "alex3" && !space.is_de_sitter()) throw ConfigError("alex3 lives on de Sitter space");
  if (variant != "alex3" && space.is_de_sitter()) throw ConfigError(variant + " does not apply on de Sitter space");
  if (variant == "alex_u" && f.source() == WeightSource::Distance)
    throw ConfigError("alex_u takes a weight of the support function u");
  if (variant != "alex_u" && f.source() == WeightSource::Support)
    throw ConfigError(variant + " takes a weight of r");

  const ConformalField field = default_field(space);
  const QuadratureGrid grid = make_grid(imm, opts.quadrature);
  const std::vector<NodeData> nodes = sample(imm, field, f, grid, opts.exec);

  RigidityProbe p;
  p.variant = variant;
  p.k = k;
  p.l = ratio ? l : 0;
  p.f = f.text();

  std::vector<double> quantity;
  for (const auto& n : nodes) {
    const double sk = n.sigma[static_cast<std::size_t>(k)];
    quantity.push_back(ratio ? n.f * sk / n.sigma[static_cast<std::size_t>(l)] : n.f * sk);
  }
  fill_common(p, imm, nodes, quantity, grid, opts);

  std::ostringstream why;
  for (const auto& n : nodes) {
    if (!(n.f > 0.0)) { why << "f = " << n.f << " is not positive at a node"; break; }
    if (n.df < 0.0) { why << "f' = " << n.df << " is negative at a node"; break; }
    if (variant == "alex_u" && !(n.min_lambda > 0.0)) {
      why << "surface is not convex (principal curvature " << n.min_lambda << ")";
      break;
    }
    if (variant == "alex2" && !(n.sigma[static_cast<std::size_t>(l)] > 0.0)) {
      why << "sigma_" << l << " is not positive at a node";
      break;
    }
    if (variant == "alex3" && n.sigma[static_cast<std::size_t>(l)] == 0.0) {
      why << "sigma_" << l << " vanishes at a node";
      break;
    }
  }
  if (!why.str().empty()) violated(p, why.str());
  return p;
}

RigidityProbe koh_probe(const Immersion& imm, const ConformalField& field, const RigidityOptions& opts) {
  if (imm.codim() != 1) throw SizeError("rigidity probes need a hypersurface");
  const AmbientSpace& space = imm.ambient();
  if (space.is_de_sitter() || (space.is_flat() && space.q() != 0))
    throw ConfigError("koh_probe needs a Riemannian space form");
  if (!(space == field.space())) throw ConfigError("field and surface live on different spaces");
  if (imm.m() < 2) throw RangeError("koh_probe needs sigma_2, so m >= 2");
  const QuadratureGrid grid = make_grid(imm, opts.quadrature);
  const std::vector<NodeData> nodes = sample(imm, field, WeightSpec::constant(1.0), grid, opts.exec);

  RigidityProbe p;
  p.variant = "koh";
  p.k = 2;
  p.l = 1;
  p.f = "1";
  std::vector<double> quantity, s1;
  for (const auto& n : nodes) {
    quantity.push_back(n.sigma[2] / n.sigma[1]);
    s1.push_back(n.sigma[1]);
  }
  fill_common(p, imm, nodes, quantity, grid, opts);
  p.sigma1_oscillation = oscillation(s1);

  for (const auto& n : nodes) {
    if (!(n.sigma[1] > 0.0)) {
      violated(p, "sigma_1 is not positive at a node");
      break;
    }
    if (!(n.alpha > 0.0)) {
      violated(p, "the conformal field has non-positive divergence at a node");
      break;
    }
  }
  return p;
}

SweepTable rigidity_sweep(const std::vector<double>& eps,
                          const std::function<RigidityProbe(double)>& probe) {
  SweepTable t;
  for (double e : eps) {
    const RigidityProbe p = probe(e);
    t.rows.push_back({e, p.hypothesis_defect, p.umbilicity_defect});
  }
  t.strictly_increasing = true;
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    if (!(t.rows[i].hypothesis_defect > t.rows[i - 1].hypothesis_defect) ||
        !(t.rows[i].umbilicity_defect > t.rows[i - 1].umbilicity_defect))
      t.strictly_increasing = false;
  return t;
}

}  // namespace mlab
