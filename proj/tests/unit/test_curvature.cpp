#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "mlab/builtins.hpp"
#include "mlab/curvature.hpp"
#include "mlab/errors.hpp"
#include "mlab/quadrature.hpp"

namespace {

using mlab::SmallMatrix;

SmallMatrix random_symmetric(std::mt19937_64& rng, int m, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  SmallMatrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

// Sum of the principal k x k minors: the k-th elementary symmetric function
// of the eigenvalues, computed without diagonalizing.
double principal_minor_sum(const SmallMatrix& a, int k) {
  const int m = static_cast<int>(a.rows());
  if (k == 0) return 1.0;
  double total = 0.0;
  for (int mask = 0; mask < (1 << m); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) != k) continue;
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if (mask & (1 << i)) idx.push_back(i);
    Eigen::MatrixXd sub(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) sub(r, c) = a(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
    total += sub.determinant();
  }
  return total;
}

TEST(Curvature, Binomial) {
  EXPECT_DOUBLE_EQ(mlab::binomial(5, 2), 10.0);
  EXPECT_DOUBLE_EQ(mlab::binomial(6, 0), 1.0);
  EXPECT_DOUBLE_EQ(mlab::binomial(6, 6), 1.0);
}

TEST(Curvature, DiagonalPacket) {
  SmallMatrix a = SmallMatrix::Zero(3, 3);
  a.diagonal() << 1.0, 2.0, 3.0;
  const auto p = mlab::packet(a);
  EXPECT_NEAR(p.H[1], 6.0, 1e-14);
  EXPECT_NEAR(p.H[2], 11.0, 1e-14);
  EXPECT_NEAR(p.H[3], 6.0, 1e-14);
  EXPECT_NEAR(p.sigma[2], 11.0 / 3.0, 1e-14);
  // T_1 = H_1 I - A has entries equal to the sum of the other eigenvalues.
  EXPECT_NEAR(p.newton(1)(0, 0), 5.0, 1e-14);
  EXPECT_NEAR(p.newton(1)(2, 2), 3.0, 1e-14);
  EXPECT_NEAR(p.newton(3).norm(), 0.0, 1e-13);
}

TEST(Curvature, PacketMatchesPrincipalMinorsAndEpsilonOracle) {
  std::mt19937_64 rng(20241016);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + trial % 5;
    const SmallMatrix a = random_symmetric(rng, m, 1.5);
    const auto p = mlab::packet(a);
    const double na = a.norm();
    for (int k = 0; k <= m; ++k) {
      const double scale = 1.0 + std::pow(na, k);
      EXPECT_NEAR(p.H[static_cast<std::size_t>(k)], principal_minor_sum(a, k), 1e-10 * scale);
      const std::vector<SmallMatrix> ops(static_cast<std::size_t>(k), a);
      const auto eo = mlab::epsilon_oracle(ops, m);
      EXPECT_NEAR(eo.H, p.H[static_cast<std::size_t>(k)], 1e-9 * scale);
      if (k < m) {
        EXPECT_LT((eo.T - p.newton(k)).norm(), 1e-9 * scale * m);
      }
    }
  }
}

TEST(Curvature, NewtonTraceIdentities) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + trial % 5;
    const SmallMatrix a = random_symmetric(rng, m, 1.0);
    const auto p = mlab::packet(a);
    for (int k = 0; k < m; ++k) {
      const double scale = 1.0 + std::pow(a.norm(), k + 1);
      const SmallMatrix& t = p.newton(k);
      EXPECT_NEAR(t.trace(), (m - k) * p.H[static_cast<std::size_t>(k)], 1e-10 * scale);
      EXPECT_NEAR((a * t).trace(), (k + 1) * p.H[static_cast<std::size_t>(k + 1)], 1e-10 * scale);
      EXPECT_LT((t - t.transpose()).norm(), 1e-12 * scale);
      if (k > 0) {
        const SmallMatrix rec = p.H[static_cast<std::size_t>(k)] * SmallMatrix::Identity(m, m) -
                                a * p.newton(k - 1);
        EXPECT_LT((rec - t).norm(), 1e-10 * scale);
      }
    }
  }
}

TEST(Curvature, NonSymmetricShapeOperatorIsRejected) {
  SmallMatrix a = SmallMatrix::Identity(3, 3);
  a(0, 1) = 0.5;
  EXPECT_THROW(mlab::packet(a), mlab::ContractError);
}

// Runs `check` on every node of a coarse grid.
template <class F>
void for_nodes(const mlab::Immersion& imm, F&& check) {
  const auto grid = mlab::make_grid(imm, {8, 16});
  for (const auto& u : grid.nodes) check(mlab::frame(imm, u));
}

TEST(Curvature, EllipsoidGaussAndMeanCurvature) {
  // With p the distance from the centre to the tangent plane:
  // K = p^4 / (abc)^2 and H = p^3 (a^2 + b^2 + c^2 - |x|^2) / (2 (abc)^2).
  const double a = 1.0, b = 1.5, c = 2.0;
  const auto imm = mlab::builtin("ellipsoid", {{"axes", {a, b, c}}});
  const double abc2 = a * a * b * b * c * c;
  for_nodes(imm, [&](const mlab::PointFrame& fr) {
    const auto& x = fr.x();
    const double p = 1.0 / std::sqrt(x[0] * x[0] / std::pow(a, 4) + x[1] * x[1] / std::pow(b, 4) +
                                      x[2] * x[2] / std::pow(c, 4));
    const auto pk = mlab::hypersurface_packet(fr);
    EXPECT_NEAR(pk.sigma[2], std::pow(p, 4) / abc2, 1e-10);
    EXPECT_NEAR(pk.sigma[1], std::pow(p, 3) * (a * a + b * b + c * c - x.squaredNorm()) / (2 * abc2),
                1e-10);
  });
}

TEST(Curvature, GeodesicSpheresAreUmbilic) {
  const double r0 = 0.8;
  const auto s = mlab::builtin("geodesic_sphere_S", {{"r0", r0}});
  for_nodes(s, [&](const mlab::PointFrame& fr) {
    const auto pk = mlab::hypersurface_packet(fr);
    for (int i = 0; i < pk.m; ++i) EXPECT_NEAR(pk.lambdas[i], 1.0 / std::tan(r0), 1e-10);
  });
  const auto h = mlab::builtin("geodesic_sphere_H", {{"r0", r0}});
  for_nodes(h, [&](const mlab::PointFrame& fr) {
    const auto pk = mlab::hypersurface_packet(fr);
    for (int i = 0; i < pk.m; ++i) EXPECT_NEAR(pk.lambdas[i], 1.0 / std::tanh(r0), 1e-10);
  });
}

TEST(Curvature, ProductTorusNormalCurvatures) {
  // On S^1(a) x S^1(b) in R^4 the normal nu_1 = (cos u, sin u, 0, 0) has shape
  // operator diag(-1/a, 0) up to orientation, and X^perp = a nu_1 + b nu_2.
  for (const auto& [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
    const auto imm = mlab::builtin("product_torus_R4", {{"a", a}, {"b", b}});
    for_nodes(imm, [&](const mlab::PointFrame& fr) {
      const auto one = mlab::multi_normal(fr, {0});
      EXPECT_NEAR(std::abs(one.sigma), 1.0 / (2 * a), 1e-10);
      mlab::AmbientVector perp = mlab::AmbientVector::Zero(4);
      for (const auto& n : fr.normals) perp += fr.dot(fr.x(), n) * n;
      const auto two = mlab::multi_normal(fr, {0}, &perp);
      EXPECT_NEAR(std::abs(two.sigma), 1.0 / (2 * a), 1e-10);
    });
  }
}

TEST(Curvature, ParallelNormalsOfProductTorus) {
  const auto flat = mlab::builtin("product_torus_R4", {{"a", 1.0}, {"b", 1.0}});
  EXPECT_LT(mlab::parallel_check(flat, 0), 1e-12);
  const auto twisted = mlab::builtin("product_torus_R4", {{"frame_twist", 1.0}});
  EXPECT_GT(mlab::parallel_check(twisted, 0), 0.1);
}

}  // namespace
