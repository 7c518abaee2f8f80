#pragma once

#include <string>
#include <string_view>

#include "mlab/immersion.hpp"

namespace mlab {

// What a weight is a function of.
enum class WeightSource {
  Constant,    // "2.5"
  Distance,    // r, geodesic distance to the field's pole
  Support,     // u = Y.nu (hypersurfaces only)
  Coordinate,  // x1..x6, ambient coordinates
  Parameter,   // t1..t3, immersion parameters
};

enum class WeightProfile { Identity, Power, Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log };

// f = profile(source), parsed from strings such as "1", "r", "r^2",
// "exp(u)", "x1", "sin(t1)", "cosh(r)".
class WeightSpec {
 public:
  static WeightSpec parse(std::string_view text);
  static WeightSpec constant(double c);

  const std::string& text() const { return text_; }
  WeightSource source() const { return source_; }
  WeightProfile profile() const { return profile_; }
  int index() const { return index_; }
  double exponent() const { return exponent_; }

  double apply(double s) const;
  double derivative(double s) const;

  struct Value {
    double s = 0.0;       // value of the source
    double f = 0.0;
    double df = 0.0;      // f'(s)
    SmallVector grad;     // orthonormal tangent components of grad f
  };
  // `field` supplies Y for the support function and the pole for r.
  Value evaluate(const PointFrame& fr, const ConformalField& field) const;

 private:
  std::string text_;
  WeightSource source_ = WeightSource::Constant;
  WeightProfile profile_ = WeightProfile::Identity;
  int index_ = 0;
  double exponent_ = 1.0;
  double constant_ = 1.0;
};

// Centre from which r is measured for a given field: the origin (or the pole)
// in flat space, the pole of a polar field, otherwise the last axis.
AmbientVector distance_pole(const ConformalField& field);

// s_K(r) with s(r) grad r = Y^T up to the sign returned by radial_sign:
// r, sin r, sinh r, cosh r on R^n, S^n, H^n, dS_n.
double radial_metric_factor(const AmbientSpace& space, double r);
// -1 on de Sitter space, where r grows along a timelike direction, else +1.
double radial_sign(const AmbientSpace& space);

// Support function u = Y.nu and its coordinate gradient along a hypersurface.
double support_function(const PointFrame& fr, const ConformalField& field, SmallVector* coord_grad);

}  // namespace mlab
