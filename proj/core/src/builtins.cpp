#include "mlab/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace mlab {

namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

double num(const json& p, const char* key, double fallback) {
  if (!p.is_object() || !p.contains(key)) return fallback;
  const json& v = p.at(key);
  if (!v.is_number()) throw ConfigError(std::string("surface parameter '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> vec(const json& p, const char* key, std::vector<double> fallback) {
  if (!p.is_object() || !p.contains(key)) return fallback;
  const json& v = p.at(key);
  if (!v.is_array()) throw ConfigError(std::string("surface parameter '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number())
      throw ConfigError(std::string("surface parameter '") + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// Unit sphere S^m in R^{m+1} in polar angles; the last coordinate is the
// cosine of the first angle (for m = 1, sin phi).
DualPoint unit_chart(const DualParams& u) {
  const int m = static_cast<int>(u.size());
  DualPoint t;
  if (m == 1) {
    t = {cos(u[0]), sin(u[0])};
  } else if (m == 2) {
    const Dual2 s = sin(u[0]);
    t = {s * cos(u[1]), s * sin(u[1]), cos(u[0])};
  } else {
    const Dual2 s0 = sin(u[0]);
    const Dual2 s1 = sin(u[1]);
    t = {s0 * s1 * cos(u[2]), s0 * s1 * sin(u[2]), s0 * cos(u[1]), cos(u[0])};
  }
  return t;
}

std::vector<ParamAxis> chart_domain(int m) {
  std::vector<ParamAxis> d;
  for (int i = 0; i + 1 < m; ++i) d.push_back(ParamAxis::interval(0.0, kPi));
  d.push_back(ParamAxis::circle());
  return d;
}

Dual2 legendre(int l, const Dual2& z) {
  if (l == 0) return Dual2(1.0);
  Dual2 prev(1.0), cur = z;
  for (int k = 1; k < l; ++k) {
    Dual2 next = ((2.0 * k + 1.0) * z * cur - static_cast<double>(k) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

// rho(theta) = R (1 + sum_l a_l P_l(theta_last) + b theta_0 theta_1)
struct RadialProfile {
  double radius = 1.0;
  std::vector<double> zonal;  // a_1, a_2, ...
  double sectoral = 0.0;

  Dual2 operator()(const DualPoint& t) const {
    Dual2 s(1.0);
    const Dual2& z = t.back();
    for (std::size_t l = 0; l < zonal.size(); ++l)
      if (zonal[l] != 0.0) s += zonal[l] * legendre(static_cast<int>(l) + 1, z);
    if (sectoral != 0.0) s += sectoral * (t[0] * t[1]);
    return radius * s;
  }
};

void check_profile(const RadialProfile& rho, int m, double upper, const char* what) {
  // Coarse scan; the profile is a low-order polynomial in the chart.
  const int steps = 24;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j)
      for (int k = 0; k <= (m == 3 ? steps : 0); ++k) {
        DualParams u;
        const double a = kPi * i / steps, b = 2 * kPi * j / steps, c = 2 * kPi * k / steps;
        if (m == 1) u = {Dual2(b)};
        else if (m == 2) u = {Dual2(a), Dual2(b)};
        else u = {Dual2(a), Dual2(kPi * j / steps), Dual2(c)};
        const double r = rho(unit_chart(u)).value();
        if (!(r > 1e-6) || !(r < upper))
          throw ConfigError(std::string(what) + ": radial profile leaves the admissible range");
      }
}

AmbientVector center_of(const json& p, int n) {
  const auto c = vec(p, "center", std::vector<double>(static_cast<std::size_t>(n), 0.0));
  if (static_cast<int>(c.size()) != n)
    throw ConfigError("surface parameter 'center' must have " + std::to_string(n) + " entries");
  AmbientVector v(n);
  for (int i = 0; i < n; ++i) v[i] = c[static_cast<std::size_t>(i)];
  return v;
}

OutwardHint away_from(const AmbientVector& c) {
  return [c](const AmbientVector& x) { return AmbientVector(x - c); };
}

OutwardHint radial_hint(const AmbientSpace& space) {
  const ConformalField field = default_field(space);
  return [field](const AmbientVector& x) { return field.value(x); };
}

// X = c + rho theta, or the corresponding polar graph over the pole of a
// pseudo-sphere: (sin rho theta, cos rho), (sinh rho theta, cosh rho),
// (cosh rho theta, sinh rho).
Immersion polar_graph(const std::string& label, const AmbientSpace& space,
                      const RadialProfile& rho, const AmbientVector& center) {
  const int m = space.intrinsic_dim() - 1;
  if (m < 1 || m > 3) throw ConfigError(label + " needs a 2, 3 or 4 dimensional ambient");
  ImmersionMap map;
  double upper = std::numeric_limits<double>::infinity();
  if (space.is_flat()) {
    if (space.q() != 0) throw ConfigError(label + " needs a Riemannian flat ambient");
    map = [rho, center](const DualParams& u) {
      DualPoint t = unit_chart(u);
      const Dual2 r = rho(t);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = center[static_cast<Eigen::Index>(i)] + r * t[i];
      return t;
    };
  } else if (space.is_round_sphere()) {
    upper = kPi;
    map = [rho](const DualParams& u) {
      DualPoint t = unit_chart(u);
      const Dual2 r = rho(t);
      const Dual2 s = sin(r);
      for (auto& c : t) c = s * c;
      t.push_back(cos(r));
      return t;
    };
  } else if (space.is_hyperbolic()) {
    upper = 20.0;
    map = [rho](const DualParams& u) {
      DualPoint t = unit_chart(u);
      const Dual2 r = rho(t);
      const Dual2 s = sinh(r);
      for (auto& c : t) c = s * c;
      t.push_back(cosh(r));
      return t;
    };
  } else if (space.is_de_sitter()) {
    upper = 20.0;
    map = [rho](const DualParams& u) {
      DualPoint t = unit_chart(u);
      const Dual2 r = rho(t);
      const Dual2 c = cosh(r);
      for (auto& x : t) x = c * x;
      t.push_back(sinh(r));
      return t;
    };
  } else {
    throw ConfigError(label + " is not available on " + space.name());
  }
  check_profile(rho, m, upper, label.c_str());
  Immersion imm(label, space, chart_domain(m), map);
  imm.with_outward(space.is_flat() ? away_from(center) : radial_hint(space));
  imm.set_embedded(true);
  return imm;
}

AmbientSpace require(const AmbientSpace& space, bool ok, const std::string& label,
                     const std::string& what) {
  if (!ok) throw ConfigError(label + " requires " + what + ", got " + space.name());
  return space;
}

Immersion make_round_sphere(const json& p, const AmbientSpace& space) {
  require(space, space.is_flat() && space.q() == 0, "round_sphere", "a Euclidean ambient");
  RadialProfile rho;
  rho.radius = num(p, "R", 1.0);
  if (!(rho.radius > 0)) throw ConfigError("round_sphere: R must be positive");
  return polar_graph("round_sphere", space, rho, center_of(p, space.ambient_dim()));
}

Immersion make_ellipsoid(const json& p, const AmbientSpace& space) {
  require(space, space.is_flat() && space.q() == 0, "ellipsoid", "a Euclidean ambient");
  const int n = space.ambient_dim();
  const auto axes = vec(p, "axes", std::vector<double>(static_cast<std::size_t>(n), 1.0));
  if (static_cast<int>(axes.size()) != n)
    throw ConfigError("ellipsoid: 'axes' must have " + std::to_string(n) + " entries");
  for (double a : axes)
    if (!(a > 0)) throw ConfigError("ellipsoid: axes must be positive");
  const AmbientVector c = center_of(p, n);
  ImmersionMap map = [axes, c](const DualParams& u) {
    DualPoint t = unit_chart(u);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = c[static_cast<Eigen::Index>(i)] + axes[i] * t[i];
    return t;
  };
  Immersion imm("ellipsoid", space, chart_domain(n - 1), map);
  imm.with_outward(away_from(c)).set_embedded(true);
  return imm;
}

Immersion make_torus(const json& p, const AmbientSpace& space) {
  require(space, space == AmbientSpace::euclidean(3), "torus_of_revolution", "R3");
  const double big = num(p, "R", 2.0), small = num(p, "rho", 1.0);
  if (!(small > 0) || !(small < big))
    throw ConfigError("torus_of_revolution: need 0 < rho < R for an embedded torus");
  const AmbientVector c = center_of(p, 3);
  ImmersionMap map = [big, small, c](const DualParams& u) {
    const Dual2 w = big + small * cos(u[1]);
    return DualPoint{c[0] + w * cos(u[0]), c[1] + w * sin(u[0]), c[2] + small * sin(u[1])};
  };
  Immersion imm("torus_of_revolution", space, {ParamAxis::circle(), ParamAxis::circle()}, map);
  imm.with_outward([big, c](const AmbientVector& x) {
    const AmbientVector d = x - c;
    const double q = std::hypot(d[0], d[1]);
    AmbientVector h(3);
    h << d[0] - big * d[0] / q, d[1] - big * d[1] / q, d[2];
    return h;
  });
  imm.set_embedded(true);
  return imm;
}

RadialProfile profile_from(const json& p, double radius_default, const char* radius_key) {
  RadialProfile rho;
  rho.radius = num(p, radius_key, radius_default);
  rho.zonal = vec(p, "zonal", {});
  rho.sectoral = num(p, "sectoral", 0.0);
  return rho;
}

Immersion make_radial_graph(const json& p, const AmbientSpace& space) {
  const RadialProfile rho = profile_from(p, 1.0, "R");
  const AmbientVector c = space.is_flat() ? center_of(p, space.ambient_dim())
                                          : AmbientVector::Zero(space.ambient_dim());
  return polar_graph("radial_graph", space, rho, c);
}

Immersion make_geodesic_sphere(const std::string& label, const json& p,
                               const AmbientSpace& space, bool spherical) {
  require(space, spherical ? space.is_round_sphere() : space.is_hyperbolic(), label,
          spherical ? "a round sphere ambient S^n" : "a hyperbolic ambient H^n");
  RadialProfile rho;
  rho.radius = num(p, "r0", spherical ? kPi / 4 : 1.0);
  if (!(rho.radius > 0) || (spherical && !(rho.radius < kPi)))
    throw ConfigError(label + ": r0 out of range");
  return polar_graph(label, space, rho, AmbientVector::Zero(space.ambient_dim()));
}

Immersion make_ds_slice(const json& p, const AmbientSpace& space) {
  require(space, space.is_de_sitter(), "ds_slice_graph", "a de Sitter ambient dS_n");
  const RadialProfile rho = profile_from(p, 0.5, "r0");
  // The slice family lives in dS_n^+ = {x_last > 0}.
  return polar_graph("ds_slice_graph", space, rho, AmbientVector::Zero(space.ambient_dim()));
}

Immersion make_perturbed_sphere(const json& p, const AmbientSpace& space) {
  const double eps = num(p, "eps", 0.05);
  RadialProfile rho;
  rho.radius = num(p, space.is_flat() ? "R" : "r0", space.is_flat() ? 1.0 : 0.6);
  rho.zonal = {0.0, eps};
  rho.sectoral = eps;
  const AmbientVector c = space.is_flat() ? center_of(p, space.ambient_dim())
                                          : AmbientVector::Zero(space.ambient_dim());
  Immersion imm = polar_graph("perturbed_sphere", space, rho, c);
  return imm;
}

Immersion make_product_torus_r4(const json& p, const AmbientSpace& space) {
  require(space, space == AmbientSpace::euclidean(4), "product_torus_R4", "R4");
  const double a = num(p, "a", 1.0), b = num(p, "b", 1.0);
  const double twist = num(p, "frame_twist", 0.0);
  if (!(a > 0) || !(b > 0)) throw ConfigError("product_torus_R4: radii must be positive");
  ImmersionMap map = [a, b](const DualParams& u) {
    return DualPoint{a * cos(u[0]), a * sin(u[0]), b * cos(u[1]), b * sin(u[1])};
  };
  Immersion imm("product_torus_R4", space, {ParamAxis::circle(), ParamAxis::circle()}, map);
  imm.with_normals([twist](const ParamPoint& u) {
    AmbientVector n1(4), n2(4);
    n1 << std::cos(u[0]), std::sin(u[0]), 0, 0;
    n2 << 0, 0, std::cos(u[1]), std::sin(u[1]);
    if (twist == 0.0) return std::vector<AmbientVector>{n1, n2};
    const double c = std::cos(twist * u[0]), s = std::sin(twist * u[0]);
    return std::vector<AmbientVector>{AmbientVector(c * n1 + s * n2),
                                      AmbientVector(-s * n1 + c * n2)};
  });
  return imm;
}

Immersion make_product_torus(const json& p, const AmbientSpace& space) {
  const auto radii = vec(p, "radii", {1.0, 1.0, 1.0});
  const int k = static_cast<int>(radii.size());
  if (k < 2 || k > 3) throw ConfigError("product_torus: 'radii' must have 2 or 3 entries");
  require(space, space == AmbientSpace::euclidean(2 * k), "product_torus",
          "R" + std::to_string(2 * k));
  for (double r : radii)
    if (!(r > 0)) throw ConfigError("product_torus: radii must be positive");
  ImmersionMap map = [radii](const DualParams& u) {
    DualPoint x;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      x.push_back(radii[i] * cos(u[i]));
      x.push_back(radii[i] * sin(u[i]));
    }
    return x;
  };
  std::vector<ParamAxis> dom(static_cast<std::size_t>(k), ParamAxis::circle());
  Immersion imm("product_torus", space, dom, map);
  imm.with_normals([k](const ParamPoint& u) {
    std::vector<AmbientVector> ns;
    for (int i = 0; i < k; ++i) {
      AmbientVector nu = AmbientVector::Zero(2 * k);
      nu[2 * i] = std::cos(u[i]);
      nu[2 * i + 1] = std::sin(u[i]);
      ns.push_back(nu);
    }
    return ns;
  });
  return imm;
}

}  // namespace

const std::vector<SurfaceInfo>& builtin_surfaces() {
  static const std::vector<SurfaceInfo> list = {
      {"round_sphere", "R2 R3 R4", "R (1), center ([0..])"},
      {"ellipsoid", "R3 R4", "axes ([1,..]), center ([0..])"},
      {"torus_of_revolution", "R3", "R (2), rho (1), center ([0,0,0])"},
      {"radial_graph", "R3 R4 S3 H3 dS3",
       "R (1), zonal ([a1, a2, ..] Legendre coefficients), sectoral (0), center"},
      {"geodesic_sphere_S", "S2 S3 S4", "r0 (pi/4)"},
      {"geodesic_sphere_H", "H2 H3 H4", "r0 (1)"},
      {"ds_slice_graph", "dS3 dS4", "r0 (0.5), zonal ([]), sectoral (0)"},
      {"perturbed_sphere", "R3 R4 S3 H3 dS3", "R or r0, eps (0.05)"},
      {"product_torus_R4", "R4", "a (1), b (1), frame_twist (0)"},
      {"product_torus", "R4 R6", "radii ([1,1,1])"},
  };
  return list;
}

AmbientSpace default_ambient(const std::string& label) {
  if (label == "geodesic_sphere_S") return AmbientSpace::sphere(3);
  if (label == "geodesic_sphere_H") return AmbientSpace::hyperbolic(3);
  if (label == "ds_slice_graph") return AmbientSpace::de_sitter(3);
  if (label == "product_torus_R4") return AmbientSpace::euclidean(4);
  if (label == "product_torus") return AmbientSpace::euclidean(6);
  for (const auto& s : builtin_surfaces())
    if (s.label == label) return AmbientSpace::euclidean(3);
  throw ConfigError("unknown surface label '" + label + "'");
}

Immersion builtin(const std::string& label, const nlohmann::json& params,
                  const AmbientSpace& space) {
  if (!params.is_null() && !params.is_object())
    throw ConfigError("surface params must be an object");
  static const std::map<std::string, std::vector<std::string>> known = {
      {"round_sphere", {"R", "center"}},
      {"ellipsoid", {"axes", "center"}},
      {"torus_of_revolution", {"R", "rho", "center"}},
      {"radial_graph", {"R", "zonal", "sectoral", "center"}},
      {"geodesic_sphere_S", {"r0"}},
      {"geodesic_sphere_H", {"r0"}},
      {"ds_slice_graph", {"r0", "zonal", "sectoral"}},
      {"perturbed_sphere", {"R", "r0", "eps", "center"}},
      {"product_torus_R4", {"a", "b", "frame_twist"}},
      {"product_torus", {"radii"}},
  };
  if (const auto it = known.find(label); it != known.end() && params.is_object())
    for (const auto& item : params.items())
      if (std::find(it->second.begin(), it->second.end(), item.key()) == it->second.end())
        throw ConfigError(label + ": unknown parameter '" + item.key() + "'");
  Immersion imm = [&]() -> Immersion {
    if (label == "round_sphere") return make_round_sphere(params, space);
    if (label == "ellipsoid") return make_ellipsoid(params, space);
    if (label == "torus_of_revolution") return make_torus(params, space);
    if (label == "radial_graph") return make_radial_graph(params, space);
    if (label == "geodesic_sphere_S") return make_geodesic_sphere(label, params, space, true);
    if (label == "geodesic_sphere_H") return make_geodesic_sphere(label, params, space, false);
    if (label == "ds_slice_graph") return make_ds_slice(params, space);
    if (label == "perturbed_sphere") return make_perturbed_sphere(params, space);
    if (label == "product_torus_R4") return make_product_torus_r4(params, space);
    if (label == "product_torus") return make_product_torus(params, space);
    throw ConfigError("unknown surface label '" + label + "'");
  }();
  imm.with_params(params.is_null() ? nlohmann::json::object() : params);
  return imm;
}

Immersion builtin(const std::string& label, const nlohmann::json& params) {
  return builtin(label, params, default_ambient(label));
}

}  // namespace mlab
