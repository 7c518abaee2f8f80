#pragma once

#include <boost/container/static_vector.hpp>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "mlab/dual.hpp"
#include "mlab/errors.hpp"
#include "mlab/linalg.hpp"

namespace mlab {

// Ambient point/vector with scalar type T (double or Dual2), no heap.
template <class T>
using PointT = boost::container::static_vector<T, kMaxAmbient>;
using DualPoint = PointT<Dual2>;

enum class SpaceKind { Flat, PseudoSphere };

// Flat R^{p,q} or the pseudo-sphere M_{p,q}(mu) = {X : X.X = mu} inside it.
class AmbientSpace {
 public:
  static AmbientSpace euclidean(int n);
  static AmbientSpace flat(int p, int q);
  static AmbientSpace sphere(int n);
  static AmbientSpace hyperbolic(int n);
  static AmbientSpace de_sitter(int n);
  static AmbientSpace pseudo_sphere(int p, int q, int mu);

  // "R3", "S3", "H3", "dS3", "R4", "R3,1".
  static AmbientSpace parse(std::string_view name);

  SpaceKind kind() const { return kind_; }
  bool is_flat() const { return kind_ == SpaceKind::Flat; }
  int p() const { return p_; }
  int q() const { return q_; }
  int mu() const { return mu_; }
  int ambient_dim() const { return p_ + q_; }
  int intrinsic_dim() const { return is_flat() ? p_ + q_ : p_ + q_ - 1; }
  // Constant sectional curvature: 0 for flat spaces, mu on pseudo-spheres.
  double curvature() const { return is_flat() ? 0.0 : static_cast<double>(mu_); }

  bool is_round_sphere() const { return !is_flat() && q_ == 0 && mu_ == 1; }
  bool is_hyperbolic() const { return !is_flat() && q_ == 1 && mu_ == -1; }
  bool is_de_sitter() const { return !is_flat() && q_ == 1 && mu_ == 1; }

  // +1 for the first p coordinates, -1 for the remaining q.
  double sign(int i) const { return i < p_ ? 1.0 : -1.0; }

  std::string name() const;

  template <class T, class V>
  T inner(const V& u, const V& v) const {
    T acc(0.0);
    for (int i = 0; i < ambient_dim(); ++i)
      acc += sign(i) * (u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)]);
    return acc;
  }

  bool contains(const AmbientVector& x, double tol = 1e-10) const;

  // Unit vector along the last coordinate axis: the default pole on S^n and
  // H^n, and the time axis of de Sitter space.
  AmbientVector last_axis() const;

  friend bool operator==(const AmbientSpace&, const AmbientSpace&) = default;

 private:
  AmbientSpace(SpaceKind kind, int p, int q, int mu)
      : kind_(kind), p_(p), q_(q), mu_(mu) {}

  SpaceKind kind_ = SpaceKind::Flat;
  int p_ = 0;
  int q_ = 0;
  int mu_ = 1;
};

// Signature inner product; throws ArgumentError on a length mismatch.
double inner(const AmbientSpace& space, const AmbientVector& u,
             const AmbientVector& v);

// v - mu (v.X) X on pseudo-spheres; identity in flat space.
AmbientVector project_tangent(const AmbientSpace& space, const AmbientVector& x,
                              const AmbientVector& v);

struct PolarCoordinates {
  double r = 0.0;
  // Unit d/dr at X; empty at the pole, its antipode, or any other point where
  // the radial direction is undefined.
  std::optional<AmbientVector> radial;
};

// Geodesic distance and radial direction from `pole` (flat, S^n, H^n). On de
// Sitter space `pole` is the unit timelike axis E and r is defined through
// sinh r = -E.X, matching the slice parametrization X = (cosh r theta, sinh r).
PolarCoordinates polar(const AmbientSpace& space, const AmbientVector& pole,
                       const AmbientVector& x);

// Templated distance used wherever r must be differentiated along a surface.
template <class T>
T polar_distance(const AmbientSpace& space, const AmbientVector& pole,
                 const PointT<T>& x) {
  using std::acos;
  using std::acosh;
  using std::asinh;
  using std::sqrt;
  const int n = space.ambient_dim();
  if (space.is_flat()) {
    T acc(0.0);
    for (int i = 0; i < n; ++i) {
      const T d = x[static_cast<std::size_t>(i)] - pole[i];
      acc += space.sign(i) * (d * d);
    }
    return sqrt(acc);
  }
  T dot(0.0);
  for (int i = 0; i < n; ++i)
    dot += space.sign(i) * (pole[i] * x[static_cast<std::size_t>(i)]);
  if (space.is_round_sphere()) return acos(dot);
  if (space.is_hyperbolic()) return acosh(-dot);
  if (space.is_de_sitter()) return asinh(-dot);
  throw DomainError("polar distance is defined on R^n, S^n, H^n and dS_n only");
}

enum class FieldKind { Position, Constant, PseudoSphereConformal, PolarRadial };

// A conformal vector field L_Y g = 2 alpha g on the ambient space.
//
// Sign table for PolarRadial (the only place signs are chosen):
//   flat       Y = X - pole                          alpha = 1
//   S^n        Z0 = pole,  Y = -Z0 + (Z0.X) X = sin r d_r,   alpha = cos r
//   H^n        Z0 = -pole, Y =  Z0 + (Z0.X) X = sinh r d_r,  alpha = cosh r
//   dS_n       Z0 = -E,    Y = -Z0 + (Z0.X) X = cosh r d_r,  alpha = sinh r
// where E is the unit timelike axis passed as `pole` on de Sitter space.
class ConformalField {
 public:
  ConformalField(const AmbientSpace& space, FieldKind kind,
                 const AmbientVector& parameter);

  FieldKind kind() const { return kind_; }
  const AmbientSpace& space() const { return space_; }
  // Z0 for Constant/PseudoSphereConformal/PolarRadial (pseudo-sphere), the
  // pole for flat PolarRadial, empty for Position.
  const AmbientVector& parameter() const { return parameter_; }
  const AmbientVector& z0() const { return z0_; }
  std::string label() const;

  template <class T>
  PointT<T> value(const PointT<T>& x) const {
    const int n = space_.ambient_dim();
    PointT<T> y(static_cast<std::size_t>(n));
    switch (effective_) {
      case Effective::Position:
        for (int i = 0; i < n; ++i) y[i] = x[i] - T(origin_[i]);
        break;
      case Effective::Constant:
        for (int i = 0; i < n; ++i) y[i] = T(z0_[i]);
        break;
      case Effective::Projected: {
        T dot(0.0);
        for (int i = 0; i < n; ++i) dot += space_.sign(i) * (z0_[i] * x[i]);
        const double mu = space_.mu();
        for (int i = 0; i < n; ++i) y[i] = -mu * z0_[i] + dot * x[i];
        break;
      }
    }
    return y;
  }

  template <class T>
  T alpha(const PointT<T>& x) const {
    switch (effective_) {
      case Effective::Position:
        return T(1.0);
      case Effective::Constant:
        return T(0.0);
      case Effective::Projected: {
        T dot(0.0);
        for (int i = 0; i < space_.ambient_dim(); ++i)
          dot += space_.sign(i) * (z0_[i] * x[i]);
        return dot;
      }
    }
    return T(0.0);
  }

  AmbientVector value(const AmbientVector& x) const;
  double alpha(const AmbientVector& x) const;

 private:
  enum class Effective { Position, Constant, Projected };

  AmbientSpace space_;
  FieldKind kind_;
  Effective effective_ = Effective::Position;
  AmbientVector parameter_;
  AmbientVector z0_;
  AmbientVector origin_;
};

ConformalField conformal_field(const AmbientSpace& space, FieldKind kind,
                               const AmbientVector& parameter = {});

// The field a space's standard polar identities use: the position field in
// flat space, otherwise the PolarRadial field around last_axis().
ConformalField default_field(const AmbientSpace& space);

AmbientVector to_vector(const PointT<double>& p);
PointT<double> to_point(const AmbientVector& v);

}  // namespace mlab
