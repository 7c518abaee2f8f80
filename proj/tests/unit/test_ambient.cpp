#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mlab/ambient.hpp"
#include "mlab/builtins.hpp"
#include "mlab/errors.hpp"
#include "mlab/identities.hpp"

namespace {

using mlab::AmbientSpace;
using mlab::AmbientVector;

AmbientVector vec(std::initializer_list<double> xs) {
  AmbientVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

TEST(Ambient, NamedConstructorSignatures) {
  const auto r3 = AmbientSpace::euclidean(3);
  EXPECT_TRUE(r3.is_flat());
  EXPECT_EQ(r3.p(), 3);
  EXPECT_EQ(r3.q(), 0);
  const auto s3 = AmbientSpace::sphere(3);
  EXPECT_EQ(s3.ambient_dim(), 4);
  EXPECT_EQ(s3.intrinsic_dim(), 3);
  EXPECT_DOUBLE_EQ(s3.curvature(), 1.0);
  const auto h3 = AmbientSpace::hyperbolic(3);
  EXPECT_EQ(h3.p(), 3);
  EXPECT_EQ(h3.q(), 1);
  EXPECT_DOUBLE_EQ(h3.curvature(), -1.0);
  const auto ds3 = AmbientSpace::de_sitter(3);
  EXPECT_TRUE(ds3.is_de_sitter());
  EXPECT_DOUBLE_EQ(ds3.curvature(), 1.0);
}

TEST(Ambient, ParseRoundTrips) {
  for (const char* name : {"R3", "R4", "S3", "H3", "dS3", "R3,1"})
    EXPECT_EQ(AmbientSpace::parse(name).name(), name);
  EXPECT_THROW(AmbientSpace::parse("Q7"), mlab::Error);
}

TEST(Ambient, InnerProducts) {
  EXPECT_DOUBLE_EQ(mlab::inner(AmbientSpace::euclidean(3), vec({1, 2, 3}), vec({1, 0, 0})), 1.0);
  // Lorentzian: the last coordinate carries a minus sign.
  EXPECT_DOUBLE_EQ(mlab::inner(AmbientSpace::flat(3, 1), vec({1, 0, 0, 2}), vec({1, 0, 0, 3})), -5.0);
  EXPECT_THROW(mlab::inner(AmbientSpace::euclidean(3), vec({1, 2}), vec({1, 0, 0})),
               mlab::ArgumentError);
}

TEST(Ambient, PositionFieldAndAlpha) {
  const auto space = AmbientSpace::euclidean(3);
  const auto field = mlab::conformal_field(space, mlab::FieldKind::Position);
  const AmbientVector x = vec({1, 2, 2});
  EXPECT_TRUE(field.value(x).isApprox(x));
  EXPECT_DOUBLE_EQ(field.alpha(x), 1.0);
}

TEST(Ambient, FlatPolarCoordinates) {
  const auto pc = mlab::polar(AmbientSpace::euclidean(3), vec({0, 0, 0}), vec({3, 4, 0}));
  EXPECT_DOUBLE_EQ(pc.r, 5.0);
  ASSERT_TRUE(pc.radial.has_value());
  EXPECT_NEAR(((*pc.radial) - vec({0.6, 0.8, 0})).norm(), 0.0, 1e-15);
}

TEST(Ambient, SpherePolarFieldMatchesSinR) {
  // On S^3 with pole e_4 the polar field is sin r d/dr and alpha = cos r.
  const auto s3 = AmbientSpace::sphere(3);
  const auto field = mlab::default_field(s3);
  const double r = 0.7;
  const AmbientVector x = vec({std::sin(r), 0, 0, std::cos(r)});
  const auto pc = mlab::polar(s3, s3.last_axis(), x);
  EXPECT_NEAR(pc.r, r, 1e-14);
  EXPECT_NEAR((field.value(x) - std::sin(r) * (*pc.radial)).norm(), 0.0, 1e-14);
  EXPECT_NEAR(field.alpha(x), std::cos(r), 1e-14);
}

TEST(Ambient, HyperbolicPolarFieldMatchesSinhR) {
  const auto h3 = AmbientSpace::hyperbolic(3);
  const auto field = mlab::default_field(h3);
  const double r = 1.3;
  const AmbientVector x = vec({0, std::sinh(r), 0, std::cosh(r)});
  ASSERT_TRUE(h3.contains(x));
  const auto pc = mlab::polar(h3, h3.last_axis(), x);
  EXPECT_NEAR(pc.r, r, 1e-13);
  EXPECT_NEAR((field.value(x) - std::sinh(r) * (*pc.radial)).norm(), 0.0, 1e-13);
  EXPECT_NEAR(field.alpha(x), std::cosh(r), 1e-13);
}

TEST(Ambient, ConformalFieldsSatisfyTangency) {
  // Y must be tangent to the pseudo-sphere: Y.X = 0.
  for (const auto& space : {AmbientSpace::sphere(3), AmbientSpace::hyperbolic(3),
                            AmbientSpace::de_sitter(3)}) {
    const auto field = mlab::default_field(space);
    AmbientVector x(4);
    if (space.is_round_sphere()) x = vec({0.5, 0.5, 0.5, 0.5});
    else if (space.is_hyperbolic()) x = vec({0.3, -0.4, 0.0, std::sqrt(1.25)});
    else x = vec({0.6, 0.0, std::sqrt(1.0 - 0.36 + 0.25), 0.5});
    ASSERT_TRUE(space.contains(x, 1e-12)) << space.name();
    EXPECT_NEAR(mlab::inner(space, field.value(x), x), 0.0, 1e-14) << space.name();
  }
}

TEST(Ambient, PoleOffTheSpaceIsRejected) {
  EXPECT_THROW(mlab::conformal_field(AmbientSpace::sphere(3), mlab::FieldKind::PolarRadial,
                                     vec({0, 0, 0, 2})),
               mlab::DomainError);
}

TEST(Ambient, HyperbolicBallWeightedVolume) {
  // For the polar field on H^3, (1/3) int Y.nu over the geodesic sphere of
  // radius 1 equals int cosh r dV = 4 pi int_0^1 cosh r sinh^2 r dr.
  const auto imm = mlab::builtin("geodesic_sphere_H", {{"r0", 1.0}});
  const double v = mlab::weighted_volume(imm, mlab::default_field(imm.ambient()));
  const double expected = 4.0 * std::numbers::pi * std::pow(std::sinh(1.0), 3) / 3.0;
  EXPECT_NEAR(v, expected, 1e-10 * expected);
}

TEST(Ambient, TorusVolumeAgainstMonteCarlo) {
  // Rejection sampling in the bounding box with a fixed 64-bit LCG.
  const auto imm = mlab::builtin("torus_of_revolution", {{"R", 2.0}, {"rho", 1.0}});
  const double v = mlab::weighted_volume(imm, mlab::default_field(imm.ambient()));
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  auto uniform = [&state] {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0);
  };
  const int n = 10'000'000;
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    const double x = -3 + 6 * uniform(), y = -3 + 6 * uniform(), z = -1 + 2 * uniform();
    const double q = std::hypot(x, y) - 2.0;
    inside += q * q + z * z < 1.0;
  }
  const double box = 72.0;
  const double p = static_cast<double>(inside) / n;
  const double mc = box * p;
  const double stderr_mc = box * std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(v, mc, 5 * stderr_mc);
  EXPECT_NEAR(v, 4 * std::numbers::pi * std::numbers::pi, 1e-10);
}

}  // namespace
