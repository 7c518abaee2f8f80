#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "mlab/builtins.hpp"
#include "mlab/errors.hpp"
#include "mlab/identities.hpp"
#include "mlab/quadrature.hpp"
#include "mlab/weights.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

TEST(Quadrature, GaussLegendreIsExactForDegree2nMinus1) {
  std::vector<double> x, w;
  const int n = 6;
  mlab::gauss_legendre(n, -1.0, 2.0, x, w);
  ASSERT_EQ(x.size(), static_cast<std::size_t>(n));
  for (int deg = 0; deg < 2 * n; ++deg) {
    double q = 0.0;
    for (int i = 0; i < n; ++i) q += w[static_cast<std::size_t>(i)] * std::pow(x[static_cast<std::size_t>(i)], deg);
    const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    EXPECT_NEAR(q, exact, 1e-12 * (1 + std::abs(exact))) << "degree " << deg;
  }
}

TEST(Quadrature, DefaultResolutionDependsOnDimension) {
  const auto two = mlab::resolve({}, 2);
  EXPECT_EQ(two.interval_nodes, 64);
  EXPECT_EQ(two.periodic_nodes, 128);
  const auto three = mlab::resolve({}, 3);
  EXPECT_EQ(three.interval_nodes, 32);
  EXPECT_EQ(three.periodic_nodes, 64);
  const auto levels = mlab::refinement_levels({}, 2);
  ASSERT_EQ(levels.size(), 3u);
  EXPECT_EQ(levels[0].interval_nodes, 16);
  EXPECT_EQ(levels[2].periodic_nodes, 128);
}

TEST(Quadrature, SurfaceAreas) {
  const auto sphere = mlab::builtin("round_sphere", {{"R", 2.0}});
  EXPECT_NEAR(mlab::surface_area(sphere), 16 * kPi, 1e-11);
  const auto torus = mlab::builtin("torus_of_revolution", {{"R", 3.0}, {"rho", 0.5}});
  EXPECT_NEAR(mlab::surface_area(torus), 4 * kPi * kPi * 3.0 * 0.5, 1e-11);
  // Area of S^1(a) x S^1(b) is 4 pi^2 a b.
  const auto flat_torus = mlab::builtin("product_torus_R4", {{"a", 2.0}, {"b", 3.0}});
  EXPECT_NEAR(mlab::surface_area(flat_torus), 24 * kPi * kPi, 1e-10);
  // Geodesic sphere of radius r0 in S^3 has area 4 pi sin^2 r0.
  const auto s3 = mlab::builtin("geodesic_sphere_S", {{"r0", 1.1}});
  EXPECT_NEAR(mlab::surface_area(s3), 4 * kPi * std::pow(std::sin(1.1), 2), 1e-11);
}

TEST(Quadrature, ThreeDimensionalHypersurfaceVolume) {
  // The unit sphere S^3 in R^4 has volume 2 pi^2.
  const auto s = mlab::builtin("round_sphere", {}, mlab::AmbientSpace::euclidean(4));
  EXPECT_NEAR(mlab::surface_area(s), 2 * kPi * kPi, 1e-10);
}

TEST(Quadrature, ReductionIsIndependentOfThreadCount) {
  const auto imm = mlab::builtin("ellipsoid", {{"axes", {1.0, 1.3, 0.7}}});
  const auto grid = mlab::make_grid(imm, {});
  auto integrand = [](const mlab::PointFrame& fr) { return std::exp(fr.x()[0]) * fr.x()[2]; };
  const double one = mlab::integrate_scalar(imm, grid, integrand, {1});
  const double four = mlab::integrate_scalar(imm, grid, integrand, {4});
  EXPECT_EQ(one, four);
}

TEST(Quadrature, NonFiniteIntegrandIsReported) {
  const auto imm = mlab::builtin("round_sphere");
  const auto grid = mlab::make_grid(imm, {8, 16});
  EXPECT_THROW(mlab::integrate_scalar(imm, grid,
                                      [](const mlab::PointFrame&) {
                                        return std::numeric_limits<double>::quiet_NaN();
                                      }),
               mlab::PoisonedResult);
}

TEST(Quadrature, CompensatedSumRecoversSmallTerms) {
  mlab::CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-13, 1e-20);
}

TEST(Quadrature, RefinementTableConverges) {
  const auto imm = mlab::builtin("ellipsoid", {{"axes", {1.0, 1.0, 1.4}}});
  const auto table = mlab::refine(
      [&](const mlab::QuadratureSpec& q) { return mlab::surface_area(imm, q); },
      mlab::refinement_levels({}, 2), 2, 1e-10);
  ASSERT_EQ(table.values.size(), 3u);
  EXPECT_TRUE(table.converged);
  EXPECT_LE(table.differences.back(), table.differences.front() + 1e-15);
}

TEST(Weights, ParseAndEvaluate) {
  const auto w = mlab::WeightSpec::parse("r^2");
  EXPECT_EQ(w.source(), mlab::WeightSource::Distance);
  EXPECT_DOUBLE_EQ(w.apply(3.0), 9.0);
  EXPECT_DOUBLE_EQ(w.derivative(3.0), 6.0);
  const auto e = mlab::WeightSpec::parse("exp(u)");
  EXPECT_EQ(e.source(), mlab::WeightSource::Support);
  EXPECT_NEAR(e.derivative(0.5), std::exp(0.5), 1e-15);
  EXPECT_EQ(mlab::WeightSpec::parse("x2").index(), 1);
  EXPECT_THROW(mlab::WeightSpec::parse("banana"), mlab::ConfigError);
  EXPECT_THROW(mlab::WeightSpec::parse(""), mlab::ConfigError);
}

TEST(Weights, SupportFunctionOfSphereIsRadius) {
  const auto imm = mlab::builtin("round_sphere", {{"R", 1.5}});
  const auto field = mlab::default_field(imm.ambient());
  const auto grid = mlab::make_grid(imm, {6, 12});
  for (const auto& u : grid.nodes) {
    const auto fr = mlab::frame(imm, u);
    EXPECT_NEAR(mlab::support_function(fr, field, nullptr), 1.5, 1e-12);
  }
}

}  // namespace
