#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/container/static_vector.hpp>
#include <nlohmann/json.hpp>

#include "mlab/ambient.hpp"

namespace mlab {

inline constexpr int kMaxParams = Dual2::kVars;

// Parameter point of an immersion (m <= 3).
using ParamPoint = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxParams, 1>;
using DualParams = boost::container::static_vector<Dual2, kMaxParams>;

struct ParamAxis {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;

  static ParamAxis interval(double lo, double hi) { return {lo, hi, false}; }
  static ParamAxis circle(double period = 2.0 * 3.141592653589793238) {
    return {0.0, period, true};
  }
};

// phi(u) written once against Dual2 so that derivatives come for free.
using ImmersionMap = std::function<DualPoint(const DualParams&)>;
// Optional analytic normal frame (used when parallelism matters).
using NormalFrameMap = std::function<std::vector<AmbientVector>(const ParamPoint&)>;
// Vector the unit normal of a hypersurface should point along (ambient
// coordinates); decides orientation pointwise.
using OutwardHint = std::function<AmbientVector(const AmbientVector&)>;

class Immersion {
 public:
  Immersion(std::string label, AmbientSpace ambient, std::vector<ParamAxis> domain,
            ImmersionMap map);

  Immersion& with_normals(NormalFrameMap normals);
  Immersion& with_outward(OutwardHint hint);
  Immersion& with_params(nlohmann::json params);
  // Closed and embedded, so that it bounds a region whose volume is meaningful.
  Immersion& set_embedded(bool embedded);

  const std::string& label() const { return label_; }
  const AmbientSpace& ambient() const { return ambient_; }
  const std::vector<ParamAxis>& domain() const { return domain_; }
  const nlohmann::json& params() const { return params_; }
  int m() const { return static_cast<int>(domain_.size()); }
  int codim() const { return ambient_.intrinsic_dim() - m(); }
  bool embedded() const { return embedded_; }
  bool has_normal_frame() const { return static_cast<bool>(normals_); }
  bool has_outward() const { return static_cast<bool>(outward_); }

  DualPoint eval(const DualParams& u) const { return map_(u); }
  AmbientVector point(const ParamPoint& u) const;
  std::vector<AmbientVector> analytic_normals(const ParamPoint& u) const {
    return normals_(u);
  }
  AmbientVector outward(const AmbientVector& x) const { return outward_(x); }

 private:
  std::string label_;
  AmbientSpace ambient_;
  std::vector<ParamAxis> domain_;
  ImmersionMap map_;
  NormalFrameMap normals_;
  OutwardHint outward_;
  nlohmann::json params_ = nlohmann::json::object();
  bool embedded_ = false;
};

struct ImmersionJet {
  int m = 0;
  AmbientVector x;
  boost::container::static_vector<AmbientVector, kMaxParams> d1;
  // Packed upper triangle, index Dual2::packed(i, j).
  boost::container::static_vector<AmbientVector, Dual2::kPacked> d2_packed;

  const AmbientVector& d2(int i, int j) const {
    return d2_packed[static_cast<std::size_t>(Dual2::packed(i, j))];
  }
  // The position as a second-order Taylor object in the parameters.
  DualPoint taylor() const;
};

ImmersionJet jet(const Immersion& imm, const ParamPoint& u);

// Everything identities need at one parameter point.
struct PointFrame {
  ParamPoint u;
  ImmersionJet jet;
  int m = 0;
  SmallMatrix g;
  SmallMatrix g_inv;
  double sqrt_det_g = 0.0;
  // g = L L^T; the orthonormal tangent basis is e_a = sum_i d1_i (L^{-T})_{ia}.
  SmallMatrix chol_l;
  AmbientMatrix tangent;  // ambient_dim x m, columns e_a
  std::vector<AmbientVector> normals;
  std::vector<double> eps;
  // A^{nu_beta}_{ij} = A(d_i, d_j).nu_beta in coordinates and in the
  // orthonormal basis. For a hypersurface the scalar form h = eps A^nu is
  // what principal curvatures are taken from.
  std::vector<SmallMatrix> shape_coord;
  std::vector<SmallMatrix> shape;
  // +1 when the hypersurface normal was flipped to match the outward hint.
  int orientation = 1;
  boost::container::static_vector<double, kMaxAmbient> signs;

  // Ambient signature inner product.
  double dot(const AmbientVector& u, const AmbientVector& v) const;

  const AmbientVector& x() const { return jet.x; }
  int codim() const { return static_cast<int>(normals.size()); }
  // Scalar second fundamental form of a hypersurface in the orthonormal basis.
  SmallMatrix scalar_shape() const { return eps.at(0) * shape.at(0); }
  // Orthonormal components of the tangential part of an ambient vector.
  SmallVector tangent_coords(const AmbientVector& v) const;
  // Ambient vector with orthonormal tangent components c.
  AmbientVector from_tangent(const SmallVector& c) const { return tangent * c; }
  // Tangential part of an ambient vector (ambient coordinates).
  AmbientVector tangential(const AmbientVector& v) const {
    return from_tangent(tangent_coords(v));
  }
  // Shape operator A^{w} for a normal vector w (linear in w).
  SmallMatrix shape_along(const AmbientVector& w) const;
  // Coordinate gradient df/du^i turned into orthonormal tangent components.
  SmallVector orthonormal_gradient(const SmallVector& coord_grad) const;
};

PointFrame frame(const Immersion& imm, const ParamPoint& u);

}  // namespace mlab
