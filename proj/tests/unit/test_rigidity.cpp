#include <cmath>

#include <gtest/gtest.h>

#include "mlab/builtins.hpp"
#include "mlab/rigidity.hpp"
#include "mlab/weights.hpp"

namespace {

using json = nlohmann::json;
using mlab::Verdict;
using mlab::WeightSpec;

void expect_umbilic(const mlab::RigidityProbe& p) {
  EXPECT_TRUE(p.hypothesis_met) << p.variant << " on " << p.surface;
  EXPECT_LT(p.hypothesis_defect, 1e-9) << p.variant << " on " << p.surface;
  EXPECT_LT(p.umbilicity_defect, 1e-9) << p.variant << " on " << p.surface;
  EXPECT_EQ(p.verdict, Verdict::Pass);
  EXPECT_NE(p.note.find("probe"), std::string::npos);
}

TEST(Rigidity, Oscillation) {
  EXPECT_DOUBLE_EQ(mlab::oscillation({2.0, 2.0, 2.0}), 0.0);
  EXPECT_NEAR(mlab::oscillation({1.0, 3.0}), 1.0, 1e-15);
}

TEST(Rigidity, GeodesicSpheresPassEveryVariant) {
  const auto r3 = mlab::builtin("round_sphere", {{"R", 1.7}});
  expect_umbilic(mlab::alexandrov_probe(r3, WeightSpec::parse("r^2"), 2, "alex_r"));
  expect_umbilic(mlab::alexandrov_probe(r3, WeightSpec::parse("exp(u)"), 2, "alex_u"));
  expect_umbilic(mlab::alexandrov_probe(r3, WeightSpec::parse("r^2"), 2, "alex2", 1));
  expect_umbilic(mlab::koh_probe(r3, mlab::default_field(r3.ambient())));

  for (const char* label : {"geodesic_sphere_S", "geodesic_sphere_H"}) {
    const auto imm = mlab::builtin(label, {{"r0", 0.7}});
    expect_umbilic(mlab::alexandrov_probe(imm, WeightSpec::parse("cosh(r)"), 2, "alex_r"));
    expect_umbilic(mlab::alexandrov_probe(imm, WeightSpec::parse("1"), 2, "alex2", 1));
    expect_umbilic(mlab::koh_probe(imm, mlab::default_field(imm.ambient())));
  }

  const auto ds = mlab::builtin("ds_slice_graph", {{"r0", 0.5}});
  expect_umbilic(mlab::alexandrov_probe(ds, WeightSpec::parse("1"), 2, "alex3", 1));
}

TEST(Rigidity, CenterEstimateFollowsTranslation) {
  const auto imm = mlab::builtin("round_sphere", {{"R", 0.8}, {"center", {0.4, -1.0, 2.5}}});
  const auto p = mlab::alexandrov_probe(imm, WeightSpec::parse("1"), 1, "alex_r");
  ASSERT_EQ(p.center_estimate.size(), 3u);
  EXPECT_NEAR(p.center_estimate[0], 0.4, 1e-8);
  EXPECT_NEAR(p.center_estimate[1], -1.0, 1e-8);
  EXPECT_NEAR(p.center_estimate[2], 2.5, 1e-8);
}

TEST(Rigidity, PerturbedSpheresFailUmbilicity) {
  const auto imm = mlab::builtin("perturbed_sphere", {{"eps", 0.05}});
  const auto p = mlab::alexandrov_probe(imm, WeightSpec::parse("1"), 2, "alex_r");
  EXPECT_GT(p.hypothesis_defect, 1e-4);
  EXPECT_GT(p.umbilicity_defect, 1e-4);
  EXPECT_FALSE(p.hypothesis_met);
  EXPECT_EQ(p.verdict, Verdict::Pass);
}

TEST(Rigidity, EpsilonSweepIsStrictlyIncreasing) {
  for (const char* ambient : {"R3", "S3", "H3"}) {
    const auto space = mlab::AmbientSpace::parse(ambient);
    const auto table = mlab::rigidity_sweep({0.01, 0.02, 0.05, 0.1}, [&](double eps) {
      const auto imm = mlab::builtin("perturbed_sphere", {{"eps", eps}}, space);
      return mlab::alexandrov_probe(imm, WeightSpec::parse("1"), 2, "alex_r");
    });
    ASSERT_EQ(table.rows.size(), 4u);
    EXPECT_TRUE(table.strictly_increasing) << ambient;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
      EXPECT_GT(table.rows[i].hypothesis_defect, table.rows[i - 1].hypothesis_defect);
      EXPECT_GT(table.rows[i].umbilicity_defect, table.rows[i - 1].umbilicity_defect);
    }
  }
}

TEST(Rigidity, ConvexityIsAHypothesisOfTheSupportVariant) {
  const auto peanut = mlab::builtin("radial_graph", {{"zonal", {0.0, 0.6}}});
  const auto p = mlab::alexandrov_probe(peanut, WeightSpec::parse("u"), 1, "alex_u");
  EXPECT_EQ(p.verdict, Verdict::HypothesisViolation);
}

}  // namespace
