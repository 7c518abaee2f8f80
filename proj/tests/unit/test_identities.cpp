#include <cmath>

#include <gtest/gtest.h>

#include "mlab/builtins.hpp"
#include "mlab/errors.hpp"
#include "mlab/identities.hpp"
#include "mlab/weights.hpp"

namespace {

using mlab::Verdict;
using mlab::WeightSpec;
using json = nlohmann::json;

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct ZooCase {
  const char* label;
  json params;
  const char* ambient;
};

class HsiungMinkowski : public ::testing::TestWithParam<ZooCase> {};

TEST_P(HsiungMinkowski, ResidualIsSmallAndConverges) {
  const auto& c = GetParam();
  const auto imm = mlab::builtin(c.label, c.params, mlab::AmbientSpace::parse(c.ambient));
  const auto field = mlab::default_field(imm.ambient());
  for (int k = 0; k < imm.m(); ++k) {
    for (const char* f : {"1", "r^2", "x1"}) {
      const auto rep = mlab::hm_identity(imm, field, WeightSpec::parse(f), k);
      EXPECT_EQ(rep.verdict, Verdict::Pass) << c.label << " k=" << k << " f=" << f << " " << rep.note;
      EXPECT_LT(rep.relative_residual, 1e-7);
      EXPECT_TRUE(rep.monotone);
      EXPECT_EQ(rep.refinement.size(), 3u);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Zoo, HsiungMinkowski,
    ::testing::Values(ZooCase{"round_sphere", json::object(), "R3"},
                      ZooCase{"ellipsoid", {{"axes", {1.0, 1.4, 0.8}}}, "R3"},
                      ZooCase{"torus_of_revolution", json::object(), "R3"},
                      ZooCase{"perturbed_sphere", {{"eps", 0.1}}, "R3"},
                      ZooCase{"geodesic_sphere_S", {{"r0", 0.9}}, "S3"},
                      ZooCase{"geodesic_sphere_H", {{"r0", 1.2}}, "H3"},
                      ZooCase{"ds_slice_graph", {{"zonal", {0.0, 0.05}}}, "dS3"},
                      ZooCase{"perturbed_sphere", {{"eps", 0.05}}, "S3"},
                      ZooCase{"perturbed_sphere", {{"eps", 0.05}}, "H3"}),
    [](const auto& info) {
      return std::string(info.param.label) + "_" + std::string(info.param.ambient) + "_" +
             std::to_string(info.index);
    });

TEST(Identities, EuclideanSupportFunctionForm) {
  // int f(u) sigma_k = int u f(u) sigma_{k+1} - c int f'(u) <T_k A X^T, X^T>.
  const auto imm = mlab::builtin("ellipsoid", {{"axes", {1.0, 1.2, 0.9}}});
  mlab::IdentityOptions o;
  o.closed_form = true;
  for (int k = 0; k < 2; ++k) {
    const auto rep = mlab::hm_identity(imm, mlab::default_field(imm.ambient()),
                                       WeightSpec::parse("exp(u)"), k, o);
    EXPECT_EQ(rep.variant, "closed_form");
    EXPECT_LT(rep.relative_residual, 1e-8) << "k=" << k;
  }
}

TEST(Identities, PolarClosedFormInSpaceForms) {
  mlab::IdentityOptions o;
  o.closed_form = true;
  for (const auto& [label, ambient] : {std::pair{"perturbed_sphere", "S3"},
                                       std::pair{"perturbed_sphere", "H3"},
                                       std::pair{"ds_slice_graph", "dS3"}}) {
    const auto imm = mlab::builtin(label, json::object(), mlab::AmbientSpace::parse(ambient));
    const auto rep = mlab::hm_identity(imm, mlab::default_field(imm.ambient()),
                                       WeightSpec::parse("r^2"), 1, o);
    EXPECT_EQ(rep.verdict, Verdict::Pass) << ambient << " " << rep.note;
  }
}

TEST(Identities, TranslationInvariance) {
  const json center = {0.3, -0.2, 0.5};
  const auto moved = mlab::builtin("ellipsoid", {{"axes", {1.0, 1.2, 0.9}}, {"center", center}});
  const auto still = mlab::builtin("ellipsoid", {{"axes", {1.0, 1.2, 0.9}}});
  mlab::AmbientVector c(3);
  c << 0.3, -0.2, 0.5;
  const auto field = mlab::conformal_field(moved.ambient(), mlab::FieldKind::PolarRadial, c);
  for (int k = 0; k < 2; ++k) {
    const auto a = mlab::hm_identity(moved, field, WeightSpec::parse("1"), k);
    const auto b = mlab::hm_identity(still, mlab::default_field(still.ambient()),
                                     WeightSpec::parse("1"), k);
    EXPECT_NEAR(a.lhs[0], b.lhs[0], 1e-10);
    EXPECT_NEAR(a.residual, b.residual, 1e-10);
  }
}

TEST(Identities, MultiNormalOnProductTorus) {
  for (const auto& [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
    const auto imm = mlab::builtin("product_torus_R4", {{"a", a}, {"b", b}});
    for (const char* f : {"1", "x1"}) {
      const auto rep = mlab::hm_multi_normal(imm, {0}, mlab::default_field(imm.ambient()),
                                             WeightSpec::parse(f));
      EXPECT_EQ(rep.verdict, Verdict::Pass) << "f=" << f;
      EXPECT_LT(rep.residual, 1e-8);
    }
  }
  // A surface has room for one normal slot only; two need a 3-fold.
  const auto surface = mlab::builtin("product_torus_R4");
  EXPECT_THROW(mlab::hm_multi_normal(surface, {0, 1}, mlab::default_field(surface.ambient()),
                                     WeightSpec::parse("1")),
               mlab::Error);
  const auto threefold = mlab::builtin("product_torus", {{"radii", {2.0, 3.0, 1.5}}});
  mlab::IdentityOptions o;
  o.quadrature.periodic_nodes = 32;
  for (const char* f : {"1", "x1"}) {
    const auto rep = mlab::hm_multi_normal(threefold, {0, 1}, mlab::default_field(threefold.ambient()),
                                           WeightSpec::parse(f), o);
    EXPECT_EQ(rep.verdict, Verdict::Pass) << "f=" << f;
    EXPECT_LT(rep.residual, 1e-8);
  }
}

TEST(Identities, TwistedFrameIsRejected) {
  const auto imm = mlab::builtin("product_torus_R4", {{"frame_twist", 1.0}});
  EXPECT_THROW(mlab::hm_multi_normal(imm, {0}, mlab::default_field(imm.ambient()),
                                     WeightSpec::parse("1")),
               mlab::PreconditionError);
}

TEST(Identities, EvenOrderInCodimensionThree) {
  const auto imm = mlab::builtin("product_torus", {{"radii", {1.0, 1.5, 2.0}}});
  const auto rep = mlab::hm_identity(imm, mlab::default_field(imm.ambient()),
                                     WeightSpec::parse("1"), 2);
  EXPECT_EQ(rep.verdict, Verdict::Pass) << rep.note;
}

TEST(Identities, ClosureOfSigmaKNu) {
  for (const auto& [label, params] :
       {std::pair{"round_sphere", json::object()},
        std::pair{"ellipsoid", json{{"axes", {1.0, 1.5, 0.7}}}},
        std::pair{"torus_of_revolution", json::object()}}) {
    const auto imm = mlab::builtin(label, params);
    const double area = mlab::surface_area(imm);
    for (int k = 0; k <= 2; ++k) {
      const auto rep = mlab::closure(imm, k);
      EXPECT_EQ(rep.verdict, Verdict::Pass);
      EXPECT_LT(max_abs(rep.lhs), 1e-8 * area) << label << " k=" << k;
    }
  }
}

TEST(Identities, VectorIdentityInPseudoSpheres) {
  for (const char* ambient : {"S3", "H3"}) {
    const auto imm = mlab::builtin("perturbed_sphere", {{"eps", 0.05}},
                                   mlab::AmbientSpace::parse(ambient));
    for (int k = 0; k < 2; ++k) {
      const auto rep = mlab::pseudo_sphere_vector_identity(imm, WeightSpec::parse("x1"), k);
      EXPECT_EQ(rep.verdict, Verdict::Pass) << ambient << " k=" << k << " " << rep.note;
    }
  }
}

TEST(Identities, DivergenceTermsCancelOnlyTogether) {
  const auto imm = mlab::builtin("ellipsoid", {{"axes", {1.0, 1.4, 0.8}}});
  const double area = mlab::surface_area(imm);
  const auto field = mlab::default_field(imm.ambient());
  for (const char* kind : {"T0", "T1", "T2", "random"}) {
    const auto rep = mlab::divergence_residual(imm, {kind, 3}, WeightSpec::parse("r^2"), field);
    EXPECT_EQ(rep.verdict, Verdict::Pass) << kind;
    EXPECT_LT(std::abs(rep.lhs[0]), 1e-8 * area);
    ASSERT_EQ(rep.rhs_terms.size(), 4u);
    // Dropping the normal-shape term leaves a clearly nonzero integral.
    const double without = rep.lhs[0] - rep.rhs_terms[3].value[0];
    if (std::string(kind) != "T2") {
      EXPECT_GT(std::abs(without), 1e-3) << kind;
    }
  }
}

TEST(Identities, InequalityChainsAreTightOnSpheres) {
  const auto sphere = mlab::builtin("round_sphere", {{"R", 1.3}});
  for (int k = 1; k <= 2; ++k) {
    const auto rep = mlab::chain(sphere, "euclid_area", k);
    EXPECT_EQ(rep.verdict, Verdict::Pass);
    EXPECT_TRUE(rep.equality_flag);
    EXPECT_LT(std::abs(rep.min_slack), 1e-9);
  }
  const auto s3 = mlab::builtin("geodesic_sphere_S", {{"r0", 0.7}});
  for (const char* v : {"sphere_tan", "sphere_sin", "sphere_volume"}) {
    const auto rep = mlab::chain(s3, v, 1);
    EXPECT_TRUE(rep.equality_flag) << v;
  }
  const auto h3 = mlab::builtin("geodesic_sphere_H", {{"r0", 0.9}});
  for (const char* v : {"hyper_area", "hyper_volume"}) {
    const auto rep = mlab::chain(h3, v, 1);
    EXPECT_TRUE(rep.equality_flag) << v;
  }
}

TEST(Identities, InequalityChainsAreStrictOnEllipsoids) {
  const auto imm = mlab::builtin("ellipsoid", {{"axes", {1.0, 1.0, 1.5}}});
  for (const char* v : {"euclid_area", "euclid_volume"}) {
    const auto rep = mlab::chain(imm, v, 1);
    EXPECT_EQ(rep.verdict, Verdict::Pass) << v;
    EXPECT_FALSE(rep.equality_flag);
    EXPECT_GT(rep.min_slack, 1e-4) << v;
  }
}

TEST(Identities, ChainHypothesesAreEnforced) {
  const auto peanut = mlab::builtin("radial_graph", {{"zonal", {0.0, 0.6}}});
  EXPECT_EQ(mlab::chain(peanut, "euclid_area", 2).verdict, Verdict::HypothesisViolation);
  // Beyond the hemisphere tan r blows up.
  const auto big = mlab::builtin("geodesic_sphere_S", {{"r0", 1.7}});
  EXPECT_EQ(mlab::chain(big, "sphere_tan", 1).verdict, Verdict::HypothesisViolation);
}

}  // namespace
