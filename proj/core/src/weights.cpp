#include "mlab/weights.hpp"

#include <charconv>
#include <cmath>

namespace mlab {

namespace {

double to_number(std::string_view s, std::string_view whole) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("cannot parse weight '" + std::string(whole) + "'");
  return v;
}

int to_index(std::string_view s, std::string_view whole, int max) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 1 || v > max)
    throw ConfigError("bad index in weight '" + std::string(whole) + "'");
  return v - 1;
}

}  // namespace

WeightSpec WeightSpec::constant(double c) {
  WeightSpec w;
  w.constant_ = c;
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, c);
  (void)ec;
  w.text_ = std::string(buf, ptr);
  return w;
}

WeightSpec WeightSpec::parse(std::string_view text) {
  std::string compact;
  for (char ch : text)
    if (ch != ' ') compact.push_back(ch);
  std::string_view s = compact;
  if (s.empty()) throw ConfigError("empty weight expression");
  if (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-' || s[0] == '.') {
    WeightSpec w = constant(to_number(s, text));
    w.text_ = compact;
    return w;
  }

  WeightSpec w;
  w.text_ = compact;
  static constexpr std::pair<std::string_view, WeightProfile> kFns[] = {
      {"sinh", WeightProfile::Sinh}, {"cosh", WeightProfile::Cosh},
      {"tanh", WeightProfile::Tanh}, {"sin", WeightProfile::Sin},
      {"cos", WeightProfile::Cos},   {"tan", WeightProfile::Tan},
      {"exp", WeightProfile::Exp},   {"log", WeightProfile::Log}};
  for (const auto& [name, prof] : kFns) {
    if (s.starts_with(name) && s.size() > name.size() + 1 && s[name.size()] == '(' && s.back() == ')') {
      w.profile_ = prof;
      s = s.substr(name.size() + 1, s.size() - name.size() - 2);
      break;
    }
  }
  if (w.profile_ == WeightProfile::Identity) {
    const auto caret = s.find('^');
    if (caret != std::string_view::npos) {
      w.profile_ = WeightProfile::Power;
      w.exponent_ = to_number(s.substr(caret + 1), text);
      s = s.substr(0, caret);
    }
  }
  if (s == "r") {
    w.source_ = WeightSource::Distance;
  } else if (s == "u") {
    w.source_ = WeightSource::Support;
  } else if (s.size() >= 2 && s[0] == 'x') {
    w.source_ = WeightSource::Coordinate;
    w.index_ = to_index(s.substr(1), text, kMaxAmbient);
  } else if (s.size() >= 2 && s[0] == 't') {
    w.source_ = WeightSource::Parameter;
    w.index_ = to_index(s.substr(1), text, kMaxParams);
  } else {
    throw ConfigError("unknown weight source in '" + std::string(text) +
                      "' (expected r, u, x<i>, t<i> or a number)");
  }
  return w;
}

double WeightSpec::apply(double s) const {
  switch (profile_) {
    case WeightProfile::Identity: return source_ == WeightSource::Constant ? constant_ : s;
    case WeightProfile::Power: return std::pow(s, exponent_);
    case WeightProfile::Sin: return std::sin(s);
    case WeightProfile::Cos: return std::cos(s);
    case WeightProfile::Tan: return std::tan(s);
    case WeightProfile::Sinh: return std::sinh(s);
    case WeightProfile::Cosh: return std::cosh(s);
    case WeightProfile::Tanh: return std::tanh(s);
    case WeightProfile::Exp: return std::exp(s);
    case WeightProfile::Log: return std::log(s);
  }
  return 0.0;
}

double WeightSpec::derivative(double s) const {
  switch (profile_) {
    case WeightProfile::Identity: return source_ == WeightSource::Constant ? 0.0 : 1.0;
    case WeightProfile::Power:
      return exponent_ == 0.0 ? 0.0 : exponent_ * std::pow(s, exponent_ - 1.0);
    case WeightProfile::Sin: return std::cos(s);
    case WeightProfile::Cos: return -std::sin(s);
    case WeightProfile::Tan: return 1.0 + std::tan(s) * std::tan(s);
    case WeightProfile::Sinh: return std::cosh(s);
    case WeightProfile::Cosh: return std::sinh(s);
    case WeightProfile::Tanh: return 1.0 - std::tanh(s) * std::tanh(s);
    case WeightProfile::Exp: return std::exp(s);
    case WeightProfile::Log: return 1.0 / s;
  }
  return 0.0;
}

AmbientVector distance_pole(const ConformalField& field) {
  const AmbientSpace& space = field.space();
  switch (field.kind()) {
    case FieldKind::PolarRadial: return field.parameter();
    case FieldKind::Position:
    case FieldKind::Constant: return AmbientVector::Zero(space.ambient_dim());
    case FieldKind::PseudoSphereConformal: break;
  }
  // A projected constant field is radial about +-Z0 when Z0 is unit; use that
  // point when it lies on the space, otherwise fall back to the last axis.
  const AmbientVector& z0 = field.z0();
  if (space.is_round_sphere() && space.contains(z0, 1e-12)) return z0;
  if (space.is_hyperbolic() && space.contains(AmbientVector(-z0), 1e-12)) return -z0;
  if (space.is_de_sitter() && std::abs(space.inner<double>(z0, z0) + 1.0) < 1e-12) return -z0;
  return space.last_axis();
}

double radial_metric_factor(const AmbientSpace& space, double r) {
  if (space.is_flat()) return r;
  if (space.is_round_sphere()) return std::sin(r);
  if (space.is_hyperbolic()) return std::sinh(r);
  if (space.is_de_sitter()) return std::cosh(r);
  throw DomainError("no radial metric factor on " + space.name());
}

double radial_sign(const AmbientSpace& space) { return space.is_de_sitter() ? -1.0 : 1.0; }

double support_function(const PointFrame& fr, const ConformalField& field, SmallVector* coord_grad) {
  if (fr.codim() != 1) throw ArgumentError("the support function u = Y.nu needs a hypersurface");
  const AmbientVector& nu = fr.normals[0];
  const DualPoint y = field.value<Dual2>(fr.jet.taylor());
  AmbientVector yv(static_cast<Eigen::Index>(y.size()));
  for (std::size_t c = 0; c < y.size(); ++c) yv[static_cast<Eigen::Index>(c)] = y[c].value();
  const double u = fr.dot(yv, nu);
  if (coord_grad) {
    const int m = fr.m;
    // d_i u = (d_i Y).nu + Y.(d_i nu), and (d_i nu).d_j = A^nu_{ij}.
    SmallVector ydotd(m);
    for (int j = 0; j < m; ++j) ydotd[j] = fr.dot(yv, fr.jet.d1[static_cast<std::size_t>(j)]);
    const SmallVector raised = fr.g_inv * ydotd;
    coord_grad->resize(m);
    for (int i = 0; i < m; ++i) {
      double dy = 0.0;
      for (std::size_t c = 0; c < y.size(); ++c)
        dy += fr.signs[c] * y[c].d(i) * nu[static_cast<Eigen::Index>(c)];
      (*coord_grad)[i] = dy + fr.shape_coord[0].row(i).dot(raised);
    }
  }
  return u;
}

WeightSpec::Value WeightSpec::evaluate(const PointFrame& fr, const ConformalField& field) const {
  Value v;
  const int m = fr.m;
  SmallVector ds = SmallVector::Zero(m);
  switch (source_) {
    case WeightSource::Constant:
      v.s = constant_;
      break;
    case WeightSource::Distance: {
      const Dual2 r = polar_distance<Dual2>(field.space(), distance_pole(field), fr.jet.taylor());
      v.s = r.value();
      for (int i = 0; i < m; ++i) ds[i] = r.d(i);
      break;
    }
    case WeightSource::Support:
      v.s = support_function(fr, field, &ds);
      break;
    case WeightSource::Coordinate:
      if (index_ >= fr.x().size()) throw ConfigError("weight '" + text_ + "' indexes past the ambient dimension");
      v.s = fr.x()[index_];
      for (int i = 0; i < m; ++i) ds[i] = fr.jet.d1[static_cast<std::size_t>(i)][index_];
      break;
    case WeightSource::Parameter:
      if (index_ >= m) throw ConfigError("weight '" + text_ + "' indexes past the surface dimension");
      v.s = fr.u[index_];
      ds[index_] = 1.0;
      break;
  }
  v.f = apply(v.s);
  v.df = derivative(v.s);
  v.grad = fr.orthonormal_gradient(v.df * ds);
  return v;
}

}  // namespace mlab
