#pragma once

#include <vector>

#include "mlab/immersion.hpp"

namespace mlab {

double binomial(int n, int k);

// Curvature data of one symmetric shape operator in an orthonormal basis.
struct CurvaturePacket {
  int m = 0;
  double eps_nu = 1.0;
  SmallVector lambdas;         // ascending
  std::vector<double> H;       // H_0..H_m
  std::vector<double> sigma;   // sigma_k = H_k / C(m, k)
  std::vector<SmallMatrix> T;  // T_0..T_m; T_m vanishes identically

  double sigma_at(int k) const { return sigma.at(static_cast<std::size_t>(k)); }
  const SmallMatrix& newton(int k) const { return T.at(static_cast<std::size_t>(k)); }
};

// Throws ContractError when `shape_op` is visibly non-symmetric.
CurvaturePacket packet(const SmallMatrix& shape_op, double eps_nu = 1.0);

// Curvature packet of a hypersurface frame (scalar second fundamental form).
CurvaturePacket hypersurface_packet(const PointFrame& fr);

struct NewtonPair {
  double H = 0.0;
  SmallMatrix T;
};

// Literal generalized-Kronecker-delta sums for H_k(A_1..A_k) and
// T_k(A_1..A_k), k = ops.size(). Factorial cost; m <= 6.
NewtonPair epsilon_oracle(const std::vector<SmallMatrix>& ops, int m);

struct MultiNormalPacket {
  std::vector<SmallMatrix> shape_ops;
  double H = 0.0;
  double sigma = 0.0;
  SmallMatrix T;
};

MultiNormalPacket multi_normal(const std::vector<SmallMatrix>& ops, int m);
// Shape operators of the listed frame normals. `extra`, when given, is a
// normal vector appended as a final slot (e.g. the normal part of a field).
MultiNormalPacket multi_normal(const PointFrame& fr, const std::vector<int>& normal_indices,
                               const AmbientVector* extra = nullptr);

// Even-order quantities of a higher-codimension immersion, where pairs of
// normal-valued factors are contracted through the ambient metric:
// sigma_k (scalar), T_k and sigma_{k+1}.w for a vector w.
struct EvenOrderTerms {
  double sigma_k = 0.0;
  SmallMatrix T_k;
  double sigma_next_dot = 0.0;
};
EvenOrderTerms even_order_terms(const PointFrame& fr, int k, const AmbientVector& w);

// Largest normal-bundle component of the derivative of normal `index` over
// `samples` deterministic pseudo-random points, per unit tangent direction.
double parallel_check(const Immersion& imm, int index, int samples = 64);

}  // namespace mlab
