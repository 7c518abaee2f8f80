#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "mlab/scenario.hpp"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

const fs::path kScenarios = MLAB_SCENARIO_DIR;

// Pointer reported for an invalid document.
std::string pointer_of(const json& doc) {
  try {
    mlab::Scenario s(doc);
  } catch (const mlab::ScenarioError& e) {
    return e.pointer();
  }
  return "<valid>";
}

json sphere_with(json checks) {
  return {{"ambient", "R3"}, {"surface", {{"label", "round_sphere"}}}, {"checks", std::move(checks)}};
}

TEST(Scenario, ValidationPointers) {
  EXPECT_EQ(pointer_of(sphere_with({{{"check_id", "closure"}}})), "<valid>");
  json doc = sphere_with({{{"check_id", "closure"}}});
  doc["colour"] = "blue";
  EXPECT_EQ(pointer_of(doc), "/colour");
  EXPECT_EQ(pointer_of(sphere_with({{{"check_id", "closur"}}})), "/checks/0/check_id");
  EXPECT_EQ(pointer_of(sphere_with({{{"check_id", "closure"}},
                                    {{"check_id", "hm_identity"}, {"parameters", {{"k", "one"}}}}})),
            "/checks/1/parameters/k");
  EXPECT_EQ(pointer_of(sphere_with({{{"check_id", "hm_identity"}, {"parameters", {{"k", 2}}}}})),
            "/checks/0/parameters/k");
  EXPECT_EQ(pointer_of(sphere_with({{{"check_id", "hm_identity"}, {"parameters", {{"field", "spiral"}}}}})),
            "/checks/0/parameters/field");
  EXPECT_EQ(pointer_of(sphere_with({{{"check_id", "hm_identity"}, {"parameters", {{"f", "banana"}}}}})),
            "/checks/0/parameters/f");
  EXPECT_EQ(pointer_of(sphere_with({{{"check_id", "chain"}, {"parameters", {{"variant", "nope"}}}}})),
            "/checks/0/parameters/variant");
  EXPECT_EQ(pointer_of(sphere_with({{{"check_id", "closure"}, {"parameters", {{"k", 1}, {"kk", 2}}}}})),
            "/checks/0/parameters/kk");
  EXPECT_EQ(pointer_of(sphere_with(json::array())), "/checks");
  EXPECT_EQ(pointer_of({{"surface", {{"label", "round_sphere"}}}}), "/checks");
  EXPECT_EQ(pointer_of({{"surface", {{"label", "blob"}}}, {"checks", {{{"check_id", "closure"}}}}}),
            "/surface/label");
  EXPECT_EQ(pointer_of({{"surface", {{"label", "round_sphere"}, {"params", {{"radius", 2}}}}},
                        {"checks", {{{"check_id", "closure"}}}}}),
            "/surface");
  EXPECT_EQ(pointer_of({{"ambient", "X9"}, {"checks", {{{"check_id", "steklov"}}}}}), "/ambient");
  EXPECT_EQ(pointer_of({{"checks", {{{"check_id", "closure"}}}}}), "/surface");
  EXPECT_EQ(pointer_of({{"checks", {{{"check_id", "steklov"}, {"parameters", {{"domain", {{"shape", "star"}}}}}}}}}),
            "/checks/0/parameters/domain");
  EXPECT_EQ(pointer_of(sphere_with({{{"check_id", "lambda1"},
                                     {"parameters", {{"mesh", {{"off", "missing.off"}, {"sidecar", "m.json"}}}}}}})),
            "/checks/0/parameters/mesh/off");
  json quad = sphere_with({{{"check_id", "closure"}}});
  quad["quadrature"] = {{"interval_nodes", 2}};
  EXPECT_EQ(pointer_of(quad), "/quadrature/interval_nodes");
}

TEST(Scenario, ExitCodePrecedence) {
  using mlab::combine_exit;
  EXPECT_EQ(combine_exit(0, 2), 2);
  EXPECT_EQ(combine_exit(2, 1), 1);
  EXPECT_EQ(combine_exit(1, 64), 64);
  EXPECT_EQ(combine_exit(64, 0), 64);
  EXPECT_EQ(combine_exit(0, 0), 0);
}

TEST(Scenario, UnitSphereIdentitiesPass) {
  const auto s = mlab::Scenario::load(kScenarios / "unit_sphere_identities.json");
  const auto r = s.run();
  EXPECT_EQ(r.exit_code, mlab::kExitPass);
  ASSERT_EQ(r.checks.size(), 12u);
  for (const auto& c : r.checks) {
    EXPECT_EQ(c.verdict, "pass") << c.file;
    EXPECT_EQ(c.report["schema"], "minkowski-lab/1");
  }
  EXPECT_EQ(r.checks.front().file, "01_hm_identity.json");
}

TEST(Scenario, PeanutChainIsAHypothesisViolation) {
  const auto r = mlab::Scenario::load(kScenarios / "peanut_chain.json").run();
  EXPECT_EQ(r.exit_code, mlab::kExitHypothesis);
  EXPECT_EQ(r.checks.at(0).verdict, "hypothesis_violation");
}

TEST(Scenario, NumericalFailureOutranksHypothesisViolation) {
  const auto r = mlab::Scenario::load(kScenarios / "mixed_verdicts.json").run();
  ASSERT_EQ(r.checks.size(), 3u);
  EXPECT_EQ(r.checks[0].verdict, "pass");
  EXPECT_EQ(r.checks[1].verdict, "fail");
  EXPECT_EQ(r.checks[2].verdict, "hypothesis_violation");
  EXPECT_EQ(r.exit_code, mlab::kExitFail);
}

TEST(Scenario, ToleranceScaling) {
  const json doc = sphere_with({{{"check_id", "hm_identity"}, {"parameters", {{"k", 1}, {"tol", 1e-40}}}}});
  const mlab::Scenario s(doc);
  EXPECT_EQ(s.run().exit_code, mlab::kExitFail);
  mlab::RunOptions o;
  o.tol_scale = 1e30;
  EXPECT_EQ(s.run(o).exit_code, mlab::kExitPass);
}

TEST(Scenario, RuntimeUsageErrorsPointAtTheCheck) {
  const json doc = sphere_with({{{"check_id", "closure"}},
                                {{"check_id", "hm_multi_normal"}, {"parameters", {{"normals", {0}}}}}});
  const auto r = mlab::Scenario(doc).run();
  EXPECT_EQ(r.exit_code, mlab::kExitUsage);
  EXPECT_EQ(r.checks[1].verdict, "error");
  EXPECT_EQ(r.checks[1].note.rfind("/checks/1", 0), 0u) << r.checks[1].note;
  EXPECT_EQ(r.checks[0].verdict, "pass");
}

TEST(Scenario, ReportsDoNotDependOnThreads) {
  const auto s = mlab::Scenario::load(kScenarios / "unit_sphere_identities.json");
  mlab::RunOptions one, three;
  three.threads = 3;
  const auto a = s.run(one), b = s.run(three);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i)
    EXPECT_EQ(a.checks[i].report.dump(), b.checks[i].report.dump());
}

TEST(Scenario, Registries) {
  EXPECT_NE(mlab::list_surfaces().find("product_torus_R4"), std::string::npos);
  EXPECT_NE(mlab::list_checks().find("steklov"), std::string::npos);
}

}  // namespace
