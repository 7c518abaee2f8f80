#include "mlab/ambient.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace mlab {

namespace {

int parse_int(std::string_view s, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value <= 0)
    throw ConfigError("unrecognized ambient space name '" + std::string(whole) + "'");
  return value;
}

void check_dims(const AmbientSpace& space, const AmbientVector& u,
                const AmbientVector& v) {
  if (u.size() != space.ambient_dim() || v.size() != space.ambient_dim()) {
    std::ostringstream os;
    os << "ambient vector length mismatch: space " << space.name() << " has dimension "
       << space.ambient_dim() << ", got " << u.size() << " and " << v.size();
    throw ArgumentError(os.str());
  }
}

}  // namespace

AmbientSpace AmbientSpace::euclidean(int n) { return flat(n, 0); }

AmbientSpace AmbientSpace::flat(int p, int q) {
  if (p < 0 || q < 0 || p + q < 1 || p + q > kMaxAmbient)
    throw ArgumentError("flat space dimension out of range");
  return AmbientSpace(SpaceKind::Flat, p, q, 1);
}

AmbientSpace AmbientSpace::pseudo_sphere(int p, int q, int mu) {
  if (mu != 1 && mu != -1) throw ArgumentError("pseudo-sphere mu must be +1 or -1");
  if (p < 0 || q < 0 || p + q < 2 || p + q > kMaxAmbient)
    throw ArgumentError("pseudo-sphere dimension out of range");
  return AmbientSpace(SpaceKind::PseudoSphere, p, q, mu);
}

AmbientSpace AmbientSpace::sphere(int n) { return pseudo_sphere(n + 1, 0, 1); }
AmbientSpace AmbientSpace::hyperbolic(int n) { return pseudo_sphere(n, 1, -1); }
AmbientSpace AmbientSpace::de_sitter(int n) { return pseudo_sphere(n, 1, 1); }

AmbientSpace AmbientSpace::parse(std::string_view name) {
  if (name.starts_with("dS")) return de_sitter(parse_int(name.substr(2), name));
  if (name.starts_with("S")) return sphere(parse_int(name.substr(1), name));
  if (name.starts_with("H")) return hyperbolic(parse_int(name.substr(1), name));
  if (name.starts_with("R")) {
    const auto rest = name.substr(1);
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos) return euclidean(parse_int(rest, name));
    return flat(parse_int(rest.substr(0, comma), name),
                parse_int(rest.substr(comma + 1), name));
  }
  throw ConfigError("unrecognized ambient space name '" + std::string(name) + "'");
}

std::string AmbientSpace::name() const {
  const int n = intrinsic_dim();
  if (is_flat()) {
    if (q_ == 0) return "R" + std::to_string(p_);
    return "R" + std::to_string(p_) + "," + std::to_string(q_);
  }
  if (is_round_sphere()) return "S" + std::to_string(n);
  if (is_hyperbolic()) return "H" + std::to_string(n);
  if (is_de_sitter()) return "dS" + std::to_string(n);
  return "M" + std::to_string(p_) + "," + std::to_string(q_) + "(" +
         std::to_string(mu_) + ")";
}

bool AmbientSpace::contains(const AmbientVector& x, double tol) const {
  if (x.size() != ambient_dim()) return false;
  if (is_flat()) return true;
  if (std::abs(inner<double>(x, x) - mu_) > tol) return false;
  // H^n is the upper sheet of M_{n,1}(-1).
  if (is_hyperbolic() && x[ambient_dim() - 1] <= 0.0) return false;
  return true;
}

AmbientVector AmbientSpace::last_axis() const {
  AmbientVector e = AmbientVector::Zero(ambient_dim());
  e[ambient_dim() - 1] = 1.0;
  return e;
}

double inner(const AmbientSpace& space, const AmbientVector& u,
             const AmbientVector& v) {
  check_dims(space, u, v);
  return space.inner<double>(u, v);
}

AmbientVector project_tangent(const AmbientSpace& space, const AmbientVector& x,
                              const AmbientVector& v) {
  check_dims(space, x, v);
  if (space.is_flat()) return v;
  return v - space.mu() * inner(space, v, x) * x;
}

PolarCoordinates polar(const AmbientSpace& space, const AmbientVector& pole,
                       const AmbientVector& x) {
  check_dims(space, pole, x);
  PolarCoordinates out;
  if (space.is_flat()) {
    if (space.q() != 0) throw DomainError("polar coordinates need a Riemannian flat space");
    const AmbientVector d = x - pole;
    out.r = d.norm();
    if (out.r > 1e-14) out.radial = d / out.r;
    return out;
  }
  if (!space.contains(x, 1e-9)) throw DomainError("point is not on " + space.name());
  if (space.is_round_sphere()) {
    if (!space.contains(pole, 1e-9)) throw DomainError("pole is not on " + space.name());
    const double c = std::clamp(inner(space, pole, x), -1.0, 1.0);
    out.r = std::acos(c);
    const double s = std::sin(out.r);
    if (s > 1e-12) out.radial = (c * x - pole) / s;
    return out;
  }
  if (space.is_hyperbolic()) {
    if (!space.contains(pole, 1e-9)) throw DomainError("pole is not on " + space.name());
    const double c = std::max(1.0, -inner(space, pole, x));
    out.r = std::acosh(c);
    const double s = std::sinh(out.r);
    if (s > 1e-12) out.radial = (c * x - pole) / s;
    return out;
  }
  if (space.is_de_sitter()) {
    if (std::abs(inner(space, pole, pole) + 1.0) > 1e-9)
      throw DomainError("de Sitter polar axis must be a unit timelike vector");
    const double s = -inner(space, pole, x);
    out.r = std::asinh(s);
    out.radial = (pole + s * x) / std::cosh(out.r);
    return out;
  }
  throw DomainError("polar coordinates are not defined on " + space.name());
}

ConformalField::ConformalField(const AmbientSpace& space, FieldKind kind,
                               const AmbientVector& parameter)
    : space_(space), kind_(kind), parameter_(parameter) {
  const int n = space.ambient_dim();
  origin_ = AmbientVector::Zero(n);
  z0_ = AmbientVector::Zero(n);
  auto require_param = [&] {
    if (parameter.size() != n)
      throw ArgumentError("field parameter must have length " + std::to_string(n));
  };
  switch (kind) {
    case FieldKind::Position:
      if (!space.is_flat())
        throw DomainError("the position field is tangent only to flat ambients");
      effective_ = Effective::Position;
      parameter_ = AmbientVector::Zero(n);
      break;
    case FieldKind::Constant:
      require_param();
      if (!space.is_flat())
        throw DomainError("constant fields on pseudo-spheres must be projected; use "
                          "PseudoSphereConformal");
      effective_ = Effective::Constant;
      z0_ = parameter;
      break;
    case FieldKind::PseudoSphereConformal:
      require_param();
      if (space.is_flat()) throw DomainError("PseudoSphereConformal needs a pseudo-sphere");
      effective_ = Effective::Projected;
      z0_ = parameter;
      break;
    case FieldKind::PolarRadial:
      require_param();
      if (space.is_flat()) {
        effective_ = Effective::Position;
        origin_ = parameter;
      } else if (space.is_round_sphere()) {
        if (!space.contains(parameter, 1e-12)) throw DomainError("pole is not on " + space.name());
        effective_ = Effective::Projected;
        z0_ = parameter;
      } else if (space.is_hyperbolic()) {
        if (!space.contains(parameter, 1e-12)) throw DomainError("pole is not on " + space.name());
        effective_ = Effective::Projected;
        z0_ = -parameter;
      } else if (space.is_de_sitter()) {
        if (std::abs(space.inner<double>(parameter, parameter) + 1.0) > 1e-12)
          throw DomainError("de Sitter polar axis must be a unit timelike vector");
        effective_ = Effective::Projected;
        z0_ = -parameter;
      } else {
        throw DomainError("PolarRadial is not defined on " + space.name());
      }
      break;
  }
}

std::string ConformalField::label() const {
  switch (kind_) {
    case FieldKind::Position: return "position";
    case FieldKind::Constant: return "constant";
    case FieldKind::PseudoSphereConformal: return "conformal";
    case FieldKind::PolarRadial: return "polar";
  }
  return "unknown";
}

AmbientVector ConformalField::value(const AmbientVector& x) const {
  return to_vector(value<double>(to_point(x)));
}

double ConformalField::alpha(const AmbientVector& x) const {
  return alpha<double>(to_point(x));
}

ConformalField conformal_field(const AmbientSpace& space, FieldKind kind,
                               const AmbientVector& parameter) {
  return ConformalField(space, kind, parameter);
}

ConformalField default_field(const AmbientSpace& space) {
  if (space.is_flat()) return ConformalField(space, FieldKind::Position, {});
  return ConformalField(space, FieldKind::PolarRadial, space.last_axis());
}

AmbientVector to_vector(const PointT<double>& p) {
  AmbientVector v(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) v[static_cast<Eigen::Index>(i)] = p[i];
  return v;
}

PointT<double> to_point(const AmbientVector& v) {
  PointT<double> p(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) p[static_cast<std::size_t>(i)] = v[i];
  return p;
}

}  // namespace mlab
