#include "mlab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace mlab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::HypothesisViolation: return "hypothesis_violation";
  }
  return "fail";
}

namespace {

struct Evaluation {
  std::vector<double> lhs;
  std::vector<std::vector<double>> rhs;
  double area = 0.0;
  // Reported in place of rhs when the identity is a vanishing sum of terms.
  std::vector<std::vector<double>> terms;
};

double max_abs(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

double residual_of(const Evaluation& e) {
  double worst = 0.0;
  for (std::size_t c = 0; c < e.lhs.size(); ++c) {
    double r = e.lhs[c];
    for (const auto& t : e.rhs) r -= t[c];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double scale_of(const Evaluation& e, bool by_area) {
  if (by_area) return e.area;
  double s = max_abs(e.lhs) + 1.0;
  for (const auto& t : e.rhs) s += max_abs(t);
  return s;
}

std::vector<int> resolution_of(const Immersion& imm, const QuadratureSpec& spec) {
  return make_grid(imm, spec).resolution;
}

// Runs `eval` at every refinement level (or only the finest) and fills the
// shared parts of the report from the finest level.
void finish(IdentityReport& rep, const Immersion& imm, const IdentityOptions& opts,
            const std::vector<std::string>& rhs_names, bool by_area,
            const std::function<Evaluation(const QuadratureSpec&)>& eval) {
  std::vector<QuadratureSpec> levels;
  if (opts.refine)
    levels = refinement_levels(opts.quadrature, imm.m());
  else
    levels = {resolve(opts.quadrature, imm.m())};
  Evaluation last;
  for (const auto& level : levels) {
    last = eval(level);
    rep.refinement.push_back(residual_of(last) / scale_of(last, by_area));
  }
  rep.surface = imm.label();
  rep.params = imm.params();
  rep.resolution = resolution_of(imm, levels.back());
  rep.lhs = last.lhs;
  const auto& shown = last.terms.empty() ? last.rhs : last.terms;
  for (std::size_t t = 0; t < rhs_names.size(); ++t) rep.rhs_terms.push_back({rhs_names[t], shown[t]});
  rep.residual = residual_of(last);
  rep.relative_residual = rep.refinement.back();
  rep.normalization = by_area ? "area" : "sum";
  rep.tolerance = opts.tol;
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.refinement.size(); ++i)
    if (rep.refinement[i] > rep.refinement[i - 1] && rep.refinement[i] > kRefinementFloor)
      rep.monotone = false;
  const bool small = rep.relative_residual < opts.tol;
  rep.verdict = small && rep.monotone ? Verdict::Pass : Verdict::Fail;
  if (!small)
    rep.note = "residual above tolerance";
  else if (!rep.monotone)
    rep.note = "residual grew under refinement";
}

AmbientVector field_value(const ConformalField& field, const PointFrame& fr) {
  return field.value(fr.x());
}

// <T grad f, Y^T> for the closed-form weights, or from the differentiated
// weight otherwise.
double gradient_term(const PointFrame& fr, const ConformalField& field, const WeightSpec& f,
                     const WeightSpec::Value& fv, const SmallMatrix& T, const SmallVector& yt,
                     bool closed_form) {
  if (closed_form && f.source() == WeightSource::Distance) {
    const double s = radial_metric_factor(field.space(), fv.s);
    return radial_sign(field.space()) * fv.df / s * yt.dot(T * yt);
  }
  if (closed_form && f.source() == WeightSource::Support)
    return fv.df * yt.dot(T * (fr.shape.at(0) * yt));
  return fv.grad.dot(T * yt);
}

void check_closed_form(const WeightSpec& f, const ConformalField& field, bool closed_form) {
  if (!closed_form) return;
  if (f.source() == WeightSource::Support) return;
  if (f.source() != WeightSource::Distance)
    throw ArgumentError("closed forms exist only for weights of r or u");
  const bool radial = field.kind() == FieldKind::PolarRadial ||
                      (field.kind() == FieldKind::Position && field.space().is_flat());
  if (!radial) throw ArgumentError("the closed form of f(r) needs a radial field");
}

}  // namespace

double surface_area(const Immersion& imm, const QuadratureSpec& q, const Execution& exec) {
  return integrate_scalar(imm, make_grid(imm, q), [](const PointFrame&) { return 1.0; }, exec);
}

IdentityReport hm_identity(const Immersion& imm, const ConformalField& field, const WeightSpec& f,
                           int k, const IdentityOptions& opts) {
  const int m = imm.m();
  if (!(imm.ambient() == field.space()))
    throw ConfigError("field lives on " + field.space().name() + ", surface on " + imm.ambient().name());
  const bool hyper = imm.codim() == 1;
  if (k < 0 || k > m - 1) throw RangeError("hm_identity needs 0 <= k <= m - 1");
  if (!hyper && k % 2 != 0)
    throw RangeError("higher codimension needs even k (odd sigma_k is normal-valued)");
  check_closed_form(f, field, opts.closed_form);
  if (opts.closed_form && f.source() == WeightSource::Support && !hyper)
    throw ArgumentError("u = Y.nu needs a hypersurface");
  const double c = 1.0 / ((m - k) * binomial(m, k));

  IdentityReport rep;
  rep.identity_id = "hm_identity";
  rep.k = k;
  rep.f = f.text();
  rep.field = field.label();
  rep.variant = opts.closed_form ? "closed_form" : "generic";
  finish(rep, imm, opts, {"f_sigma_next_support", "newton_gradient"}, false,
         [&](const QuadratureSpec& q) {
           const auto v = integrate(
               imm, make_grid(imm, q), 3,
               [&](const PointFrame& fr, double* out) {
                 const AmbientVector y = field_value(field, fr);
                 const double alpha = field.alpha(fr.x());
                 const WeightSpec::Value fv = f.evaluate(fr, field);
                 const SmallVector yt = fr.tangent_coords(y);
                 double sk = 0.0, next = 0.0;
                 SmallMatrix T;
                 if (hyper) {
                   const CurvaturePacket p = hypersurface_packet(fr);
                   sk = p.sigma_at(k);
                   next = p.sigma_at(k + 1) * fr.dot(y, fr.normals[0]);
                   T = p.newton(k);
                 } else {
                   const EvenOrderTerms e = even_order_terms(fr, k, y);
                   sk = e.sigma_k;
                   next = e.sigma_next_dot;
                   T = e.T_k;
                 }
                 out[0] = alpha * fv.f * sk;
                 out[1] = fv.f * next;
                 out[2] = gradient_term(fr, field, f, fv, T, yt, opts.closed_form);
               },
               opts.exec);
           return Evaluation{{v[0]}, {{v[1]}, {-c * v[2]}}, 0.0, {}};
         });
  return rep;
}

IdentityReport hm_multi_normal(const Immersion& imm, const std::vector<int>& normals,
                               const ConformalField& field, const WeightSpec& f,
                               const IdentityOptions& opts) {
  const int m = imm.m();
  const int k = static_cast<int>(normals.size());
  if (imm.codim() < 2) throw SizeError("hm_multi_normal needs codimension >= 2");
  if (k > m - 1) throw RangeError("hm_multi_normal needs at most m - 1 normals");
  for (int idx : normals) {
    if (idx < 0 || idx >= imm.codim()) throw RangeError("normal index out of range");
    const double drift = parallel_check(imm, idx);
    if (drift > 1e-7) {
      std::ostringstream os;
      os << "normal " << idx << " is not parallel in the normal bundle (max normal derivative "
         << drift << ")";
      throw PreconditionError(os.str());
    }
  }
  const double c = 1.0 / ((m - k) * binomial(m, k));

  IdentityReport rep;
  rep.identity_id = "hm_multi_normal";
  rep.k = k;
  rep.f = f.text();
  rep.field = field.label();
  std::ostringstream variant;
  variant << "normals";
  for (int idx : normals) variant << ' ' << idx;
  rep.variant = variant.str();
  finish(rep, imm, opts, {"f_sigma_next_normal_part", "newton_gradient"}, false,
         [&](const QuadratureSpec& q) {
           const auto v = integrate(
               imm, make_grid(imm, q), 3,
               [&](const PointFrame& fr, double* out) {
                 const AmbientVector y = field_value(field, fr);
                 const WeightSpec::Value fv = f.evaluate(fr, field);
                 const MultiNormalPacket base = multi_normal(fr, normals);
                 const MultiNormalPacket next = multi_normal(fr, normals, &y);
                 out[0] = field.alpha(fr.x()) * fv.f * base.sigma;
                 out[1] = fv.f * next.sigma;
                 out[2] = fv.grad.dot(base.T * fr.tangent_coords(y));
               },
               opts.exec);
           return Evaluation{{v[0]}, {{v[1]}, {-c * v[2]}}, 0.0, {}};
         });
  return rep;
}

IdentityReport closure(const Immersion& imm, int k, const IdentityOptions& opts) {
  if (imm.codim() != 1) throw SizeError("closure needs a hypersurface");
  if (!imm.ambient().is_flat()) throw ConfigError("closure is a flat-space identity");
  const int m = imm.m();
  if (k < 0 || k > m) throw RangeError("closure needs 0 <= k <= m");
  const int n = imm.ambient().ambient_dim();
  IdentityReport rep;
  rep.identity_id = "closure";
  rep.k = k;
  rep.f = "1";
  rep.field = "none";
  rep.variant = "vector";
  IdentityOptions o = opts;
  if (o.tol == IdentityOptions{}.tol) o.tol = 1e-8;
  finish(rep, imm, o, {}, true, [&](const QuadratureSpec& q) {
    const auto v = integrate(
        imm, make_grid(imm, q), n + 1,
        [&](const PointFrame& fr, double* out) {
          const double s = hypersurface_packet(fr).sigma_at(k);
          for (int i = 0; i < n; ++i) out[i] = s * fr.normals[0][i];
          out[n] = 1.0;
        },
        opts.exec);
    Evaluation e;
    e.lhs.assign(v.begin(), v.begin() + n);
    e.area = v[static_cast<std::size_t>(n)];
    return e;
  });
  return rep;
}

double weighted_volume(const Immersion& imm, const ConformalField& field, const IdentityOptions& opts) {
  if (imm.codim() != 1) throw SizeError("weighted_volume needs a hypersurface");
  if (!imm.embedded()) throw ConfigError("weighted_volume needs a closed embedded hypersurface");
  const double n = imm.m() + 1;
  return integrate_scalar(
             imm, make_grid(imm, opts.quadrature),
             [&](const PointFrame& fr) { return fr.dot(field.value(fr.x()), fr.normals[0]); },
             opts.exec) /
         n;
}

const std::vector<std::string>& chain_variants() {
  static const std::vector<std::string> v = {"euclid_area",   "euclid_volume", "sphere_tan",
                                             "sphere_sin",    "sphere_volume", "hyper_area",
                                             "hyper_volume"};
  return v;
}

ChainReport chain(const Immersion& imm, const std::string& variant, int k, double p,
                  const IdentityOptions& opts) {
  const auto& names = chain_variants();
  if (std::find(names.begin(), names.end(), variant) == names.end())
    throw ConfigError("unknown chain variant '" + variant + "'");
  if (imm.codim() != 1) throw SizeError("chains need a hypersurface");
  const AmbientSpace& space = imm.ambient();
  const std::string family = variant.substr(0, variant.find('_'));
  if ((family == "euclid" && !(space.is_flat() && space.q() == 0)) ||
      (family == "sphere" && !space.is_round_sphere()) ||
      (family == "hyper" && !space.is_hyperbolic()))
    throw ConfigError("chain " + variant + " does not apply on " + space.name());
  const int m = imm.m();
  if (k < 1 || k > m) throw RangeError("chains need 1 <= k <= m");
  const bool volume = variant.ends_with("volume");
  if (volume && !imm.embedded()) throw ConfigError("volume chains need a closed embedded hypersurface");

  const ConformalField field = default_field(space);
  const AmbientVector pole = distance_pole(field);
  const QuadratureGrid grid = make_grid(imm, resolve(opts.quadrature, m));

  ChainReport rep;
  rep.chain_id = variant;
  rep.surface = imm.label();
  rep.params = imm.params();
  rep.k = k;
  rep.tolerance = opts.slack_tol;
  rep.resolution = grid.resolution;

  // Hypothesis scan on the quadrature nodes.
  std::vector<double> scan(grid.nodes.size() * 3);
  parallel_for(grid.nodes.size(), opts.exec, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const PointFrame fr = frame(imm, grid.nodes[i]);
      scan[3 * i] = hypersurface_packet(fr).sigma_at(k);
      scan[3 * i + 1] = polar(space, pole, fr.x()).r;
      scan[3 * i + 2] = 0.0;
    }
  });
  double min_sigma = INFINITY, min_r = INFINITY, max_r = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    min_sigma = std::min(min_sigma, scan[3 * i]);
    min_r = std::min(min_r, scan[3 * i + 1]);
    max_r = std::max(max_r, scan[3 * i + 1]);
  }
  std::ostringstream why;
  if (!(min_sigma > 0.0)) why << "sigma_" << k << " is not positive (min " << min_sigma << ")";
  else if (!(min_r > 1e-6)) why << "surface passes through the pole (min r " << min_r << ")";
  else if (family == "sphere" && max_r > std::numbers::pi / 2 - 1e-3)
    why << "surface leaves the open hemisphere (max r " << max_r << ")";
  if (!why.str().empty()) {
    rep.verdict = Verdict::HypothesisViolation;
    rep.note = why.str();
    return rep;
  }

  // Components: [support integral, j = 0..k terms].
  const int comps = k + 2;
  const auto v = integrate(
      imm, grid, comps,
      [&](const PointFrame& fr, double* out) {
        const CurvaturePacket pk = hypersurface_packet(fr);
        const double r = polar(space, pole, fr.x()).r;
        out[0] = fr.dot(field.value(fr.x()), fr.normals[0]);
        for (int j = 0; j <= k; ++j) {
          const double s = pk.sigma_at(j);
          double w = 0.0;
          if (variant == "euclid_area") w = std::pow(r, p + j);
          else if (variant == "euclid_volume") w = std::pow(r, j + 1);
          else if (variant == "sphere_tan") w = std::pow(std::tan(r), j);
          else if (variant == "sphere_sin") w = j == 0 ? std::cos(r) : std::pow(std::tan(r), j - 1) * std::sin(r);
          else if (variant == "sphere_volume") w = std::pow(std::tan(r), j + 1) * std::cos(r);
          else if (variant == "hyper_area") w = j == 0 ? std::cosh(r) : std::pow(std::tanh(r), j - 1) * std::sinh(r);
          else if (variant == "hyper_volume") w = std::pow(std::tanh(r), j + 1) * std::cosh(r);
          out[j + 1] = s * w;
        }
      },
      opts.exec);
  if (volume) rep.values.push_back(v[0]);
  for (int j = 0; j <= k; ++j) rep.values.push_back(v[static_cast<std::size_t>(j + 1)]);

  rep.min_slack = INFINITY;
  bool all_tight = true;
  for (std::size_t i = 0; i + 1 < rep.values.size(); ++i) {
    const double a = rep.values[i], b = rep.values[i + 1];
    const double slack = (b - a) / std::max({std::abs(a), std::abs(b), 1e-300});
    rep.slacks.push_back(slack);
    rep.min_slack = std::min(rep.min_slack, slack);
    if (std::abs(slack) >= rep.tolerance) all_tight = false;
  }
  rep.equality_flag = all_tight;
  rep.verdict = rep.min_slack >= -rep.tolerance ? Verdict::Pass : Verdict::Fail;
  if (rep.verdict == Verdict::Fail) rep.note = "chain inequality violated";
  return rep;
}

IdentityReport pseudo_sphere_vector_identity(const Immersion& imm, const WeightSpec& f, int k,
                                             const IdentityOptions& opts) {
  const AmbientSpace& space = imm.ambient();
  if (space.is_flat()) throw ConfigError("the vector identity lives on a pseudo-sphere");
  if (imm.codim() != 1) throw SizeError("the vector identity needs a hypersurface");
  const int m = imm.m();
  if (k < 0 || k > m - 1) throw RangeError("vector identity needs 0 <= k <= m - 1");
  const double mu = space.mu();
  const double c = 1.0 / ((m - k) * binomial(m, k));
  const int n = space.ambient_dim();
  const ConformalField field = default_field(space);

  IdentityReport rep;
  rep.identity_id = "vector_identity";
  rep.k = k;
  rep.f = f.text();
  rep.field = field.label();
  rep.variant = "vector";
  finish(rep, imm, opts, {"mu_f_sigma_next_normal", "mu_c_newton_gradient"}, false,
         [&](const QuadratureSpec& q) {
           const auto v = integrate(
               imm, make_grid(imm, q), 3 * n,
               [&](const PointFrame& fr, double* out) {
                 const CurvaturePacket pk = hypersurface_packet(fr);
                 const WeightSpec::Value fv = f.evaluate(fr, field);
                 const AmbientVector tg = fr.from_tangent(pk.newton(k) * fv.grad);
                 for (int i = 0; i < n; ++i) {
                   out[i] = fv.f * pk.sigma_at(k) * fr.x()[i];
                   out[n + i] = fv.f * pk.sigma_at(k + 1) * fr.normals[0][i];
                   out[2 * n + i] = tg[i];
                 }
               },
               opts.exec);
           Evaluation e;
           e.lhs.assign(v.begin(), v.begin() + n);
           std::vector<double> a(n), b(n);
           for (int i = 0; i < n; ++i) {
             a[static_cast<std::size_t>(i)] = -mu * v[static_cast<std::size_t>(n + i)];
             b[static_cast<std::size_t>(i)] = mu * c * v[static_cast<std::size_t>(2 * n + i)];
           }
           e.rhs = {a, b};
           return e;
         });
  return rep;
}

namespace {

// Random ambient quadratic field S(x) = S0 + sum_c x_c S_c of symmetric
// matrices; T(V, W) = V^T S(x) W restricted to the surface.
struct RandomTensor {
  AmbientMatrix s0;
  std::vector<AmbientMatrix> sc;

  RandomTensor(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    auto sym = [&] {
      AmbientMatrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = d(rng);
      return a;
    };
    s0 = sym();
    for (int c = 0; c < n; ++c) sc.push_back(sym());
  }

  AmbientMatrix at(const AmbientVector& x) const {
    AmbientMatrix s = s0;
    for (int c = 0; c < x.size(); ++c) s += x[c] * sc[static_cast<std::size_t>(c)];
    return s;
  }
  AmbientMatrix along(const AmbientVector& dx) const {
    AmbientMatrix s = AmbientMatrix::Zero(s0.rows(), s0.cols());
    for (int c = 0; c < dx.size(); ++c) s += dx[c] * sc[static_cast<std::size_t>(c)];
    return s;
  }

  // Orthonormal components of T and of the 1-form div T.
  void evaluate(const PointFrame& fr, SmallMatrix& t_on, SmallVector& div_on) const {
    const int m = fr.m;
    const auto& jt = fr.jet;
    const AmbientMatrix s = at(jt.x);
    SmallMatrix t(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) t(i, j) = jt.d1[static_cast<std::size_t>(i)].dot(s * jt.d1[static_cast<std::size_t>(j)]);
    // dT[k](i, j) = d_k T_ij
    std::vector<SmallMatrix> dt;
    for (int k = 0; k < m; ++k) {
      const AmbientMatrix ds = along(jt.d1[static_cast<std::size_t>(k)]);
      SmallMatrix d(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const auto& di = jt.d1[static_cast<std::size_t>(i)];
          const auto& dj = jt.d1[static_cast<std::size_t>(j)];
          d(i, j) = jt.d2(i, k).dot(s * dj) + di.dot(s * jt.d2(j, k)) + di.dot(ds * dj);
        }
      dt.push_back(d);
    }
    // Christoffel symbols gamma[l](k, i) = g^{lp} (d_p . d_ki).
    std::vector<SmallMatrix> gamma(static_cast<std::size_t>(m), SmallMatrix::Zero(m, m));
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i) {
        SmallVector low(m);
        for (int p = 0; p < m; ++p) low[p] = fr.dot(jt.d1[static_cast<std::size_t>(p)], jt.d2(k, i));
        const SmallVector up = fr.g_inv * low;
        for (int l = 0; l < m; ++l) gamma[static_cast<std::size_t>(l)](k, i) = up[l];
      }
    SmallVector div = SmallVector::Zero(m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
          double cov = dt[static_cast<std::size_t>(k)](i, j);
          for (int l = 0; l < m; ++l)
            cov -= gamma[static_cast<std::size_t>(l)](k, i) * t(l, j) +
                   gamma[static_cast<std::size_t>(l)](k, j) * t(i, l);
          div[j] += fr.g_inv(i, k) * cov;
        }
    const SmallMatrix linv = fr.chol_l.triangularView<Eigen::Lower>().solve(SmallMatrix::Identity(m, m));
    t_on = linv * t * linv.transpose();
    div_on = linv * div;
  }
};

}  // namespace

IdentityReport divergence_residual(const Immersion& imm, const TensorSpec& tensor, const WeightSpec& f,
                                   const ConformalField& field, const IdentityOptions& opts) {
  if (!(imm.ambient() == field.space()))
    throw ConfigError("field lives on " + field.space().name() + ", surface on " + imm.ambient().name());
  const int m = imm.m();
  const bool random = tensor.kind == "random";
  const bool metric = tensor.kind == "metric";
  int order = -1;
  if (!random && !metric) {
    if (tensor.kind.size() < 2 || tensor.kind[0] != 'T')
      throw ConfigError("unknown tensor '" + tensor.kind + "' (T<k>, metric or random)");
    try {
      order = std::stoi(tensor.kind.substr(1));
    } catch (const std::exception&) {
      throw ConfigError("unknown tensor '" + tensor.kind + "'");
    }
    if (order < 0 || order > m) throw RangeError("Newton tensor order out of range");
    if (imm.codim() > 1 && order % 2 != 0)
      throw RangeError("odd Newton tensors are normal-valued in higher codimension");
    if (imm.codim() > 1 && order > m - 1) throw RangeError("Newton tensor order out of range");
  }
  const RandomTensor rt(imm.ambient().ambient_dim(), tensor.seed);

  IdentityReport rep;
  rep.identity_id = "divergence_residual";
  rep.k = std::max(order, 0);
  rep.f = f.text();
  rep.field = field.label();
  rep.variant = tensor.kind;
  IdentityOptions o = opts;
  if (o.tol == IdentityOptions{}.tol) o.tol = 1e-8;
  finish(rep, imm, o, {"gradient", "divergence", "lie_derivative", "normal_shape"}, true,
         [&](const QuadratureSpec& q) {
           const auto v = integrate(
               imm, make_grid(imm, q), 5,
               [&](const PointFrame& fr, double* out) {
                 SmallMatrix T;
                 SmallVector divT = SmallVector::Zero(m);
                 if (random) {
                   rt.evaluate(fr, T, divT);
                 } else if (metric || order == 0) {
                   T = SmallMatrix::Identity(m, m);
                 } else if (fr.codim() == 1) {
                   T = hypersurface_packet(fr).newton(order);
                 } else {
                   T = even_order_terms(fr, order, AmbientVector::Zero(fr.x().size())).T_k;
                 }
                 const DualPoint yd = field.value<Dual2>(fr.jet.taylor());
                 AmbientVector y(static_cast<Eigen::Index>(yd.size()));
                 for (std::size_t c = 0; c < yd.size(); ++c) y[static_cast<Eigen::Index>(c)] = yd[c].value();
                 const SmallVector yt = fr.tangent_coords(y);
                 const WeightSpec::Value fv = f.evaluate(fr, field);
                 // Ambient derivative of Y along the orthonormal frame.
                 const SmallMatrix linv =
                     fr.chol_l.triangularView<Eigen::Lower>().solve(SmallMatrix::Identity(m, m));
                 SmallMatrix dy(m, m);  // dy(a, b) = e_a . D_{e_b} Y
                 for (int b = 0; b < m; ++b) {
                   AmbientVector d = AmbientVector::Zero(y.size());
                   for (int i = 0; i < m; ++i)
                     for (std::size_t c = 0; c < yd.size(); ++c)
                       d[static_cast<Eigen::Index>(c)] += linv(b, i) * yd[c].d(i);
                   for (int a = 0; a < m; ++a) dy(a, b) = fr.dot(fr.tangent.col(a), d);
                 }
                 const SmallMatrix lie = dy + dy.transpose();
                 const SmallMatrix ashape = fr.shape_along(y);
                 out[0] = fv.grad.dot(T * yt);
                 out[1] = fv.f * divT.dot(yt);
                 out[2] = 0.5 * fv.f * (T.cwiseProduct(lie)).sum();
                 out[3] = -fv.f * (T.cwiseProduct(ashape)).sum();
                 out[4] = 1.0;
               },
               opts.exec);
           Evaluation e;
           e.lhs = {v[0] + v[1] + v[2] + v[3]};
           e.area = v[4];
           e.terms = {{v[0]}, {v[1]}, {v[2]}, {v[3]}};
           return e;
         });
  return rep;
}

}  // namespace mlab
