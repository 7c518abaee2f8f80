#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "mlab/builtins.hpp"
#include "mlab/errors.hpp"
#include "mlab/mesh.hpp"
#include "mlab/spectral.hpp"

namespace {

constexpr double kPi = std::numbers::pi;
using mlab::Verdict;

TEST(Mesh, SphereTriangulationIsClosedAndAccurate) {
  const auto mesh = mlab::triangulate(mlab::builtin("round_sphere"), 4000);
  const auto q = mlab::inspect(mesh);
  EXPECT_TRUE(q.watertight);
  EXPECT_TRUE(q.oriented);
  EXPECT_TRUE(q.ok());
  EXPECT_NEAR(mesh.size(), 4000.0, 400.0);
  // Inscribed polyhedra lose area at order h^2.
  EXPECT_LT(mesh.area(), 4 * kPi);
  EXPECT_GT(mesh.area(), 4 * kPi * (1 - 5e-3));
  for (const auto& s : mesh.sigma) EXPECT_NEAR(s[2], 1.0, 1e-9);
}

TEST(Mesh, TorusTriangulation) {
  const auto mesh = mlab::triangulate(mlab::builtin("torus_of_revolution"), 3000);
  const auto q = mlab::inspect(mesh);
  EXPECT_TRUE(q.ok());
  EXPECT_NEAR(mesh.area(), 8 * kPi * kPi, 8 * kPi * kPi * 5e-3);
}

TEST(Mesh, OffRoundTrip) {
  const auto mesh = mlab::triangulate(mlab::builtin("ellipsoid", {{"axes", {1.0, 1.0, 1.3}}}), 500);
  const auto dir = std::filesystem::temp_directory_path() / "mlab_off_round_trip";
  std::filesystem::create_directories(dir);
  const auto off = (dir / "e.off").string(), side = (dir / "e.json").string();
  mlab::write_off(mesh, off, side);
  const auto back = mlab::read_off(off, side);
  ASSERT_EQ(back.size(), mesh.size());
  ASSERT_EQ(back.triangles.size(), mesh.triangles.size());
  EXPECT_EQ(back.triangles, mesh.triangles);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    EXPECT_EQ((back.vertices[i] - mesh.vertices[i]).norm(), 0.0);
    EXPECT_EQ(back.sigma[i], mesh.sigma[i]);
  }
  EXPECT_EQ(mlab::lambda1(back, 0, {}).lambda1, mlab::lambda1(mesh, 0, {}).lambda1);
  std::filesystem::remove_all(dir);
}

TEST(Mesh, MissingFilesAreConfigErrors) {
  EXPECT_THROW(mlab::read_off("/nonexistent.off", "/nonexistent.json"), mlab::ConfigError);
}

TEST(Spectral, SecondOrderConvergenceOnTheSphere) {
  // The first nonzero eigenvalue of the unit sphere is 2 with multiplicity 3;
  // P1 elements converge at order h^2, and h halves when N quadruples.
  const auto imm = mlab::builtin("round_sphere");
  mlab::SpectralOptions o;
  o.richardson = false;
  std::vector<double> err;
  for (int n : {400, 1600, 6400}) {
    o.vertices = n;
    err.push_back(std::abs(mlab::lambda1(imm, 0, o).lambda1 - 2.0));
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double order = std::log2(err[i - 1] / err[i]);
    EXPECT_GT(order, 1.6) << "level " << i;
    EXPECT_LT(order, 2.5) << "level " << i;
  }
}

TEST(Spectral, EigenpairIsOrthogonalToConstants) {
  mlab::SpectralOptions o;
  o.vertices = 2000;
  const auto rep = mlab::lambda1(mlab::builtin("round_sphere"), 0, o);
  EXPECT_LT(std::abs(rep.orthogonality), 1e-10);
  EXPECT_LT(rep.rayleigh_residual, 1e-10);
  EXPECT_NEAR(rep.bound, 2.0, 1e-9);
  EXPECT_EQ(rep.verdict, Verdict::Pass);
}

TEST(Spectral, StrictInequalityOnAnEllipsoid) {
  mlab::SpectralOptions o;
  o.vertices = 3000;
  const auto rep = mlab::lambda1(mlab::builtin("ellipsoid", {{"axes", {1.0, 1.0, 1.2}}}), 0, o);
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  EXPECT_TRUE(rep.raw_pass);
  EXPECT_GT(rep.slack, 0.5);
}

TEST(Spectral, HypothesesAndRanges) {
  const auto torus = mlab::builtin("torus_of_revolution");
  EXPECT_EQ(mlab::lambda1(torus, 0, {}).verdict, Verdict::HypothesisViolation);
  EXPECT_THROW(mlab::lambda1(mlab::builtin("round_sphere"), 1, {}), mlab::RangeError);
}

TEST(Spectral, GarayEqualityOnTheSphere) {
  mlab::SpectralOptions o;
  o.vertices = 4000;
  const auto rep = mlab::garay(mlab::builtin("round_sphere"), 0, o);
  // 3 lambda Vol = 3 * 2 * 4 pi / 3 = 8 pi = 2 * 1 * 4 pi.
  EXPECT_NEAR(rep.rhs, 8 * kPi, 1e-8);
  EXPECT_NEAR(rep.lhs, 8 * kPi, 0.01 * 8 * kPi);
  EXPECT_EQ(rep.verdict, Verdict::Pass);
}

TEST(Spectral, GarayNeedsAnEmbeddedSurfaceOfR3) {
  EXPECT_THROW(mlab::garay(mlab::builtin("geodesic_sphere_S"), 0, {}), mlab::ConfigError);
}

TEST(Steklov, DiskMeshShape) {
  const auto mesh = mlab::disk_mesh(mlab::StarDomain::disk(1.0), 6);
  EXPECT_EQ(mesh.vertices.size(), 1u + 3u * 6u * 7u);
  EXPECT_EQ(mesh.boundary.size(), 36u);
}

TEST(Steklov, UnitDiskFirstEigenvalueIsOne) {
  const auto rep = mlab::steklov(mlab::StarDomain::disk(1.0), 48, true);
  EXPECT_NEAR(rep.lambda1, 1.0, 1e-3);
  EXPECT_NEAR(rep.bound, 1.0, 1e-12);
  EXPECT_EQ(rep.verdict, Verdict::Pass);
}

TEST(Steklov, DiskScaling) {
  // p_1 of a disk of radius R is 1 / R.
  const auto rep = mlab::steklov(mlab::StarDomain::disk(2.0), 32, true);
  EXPECT_NEAR(rep.lambda1, 0.5, 1e-3);
}

TEST(Steklov, EllipseIsStrict) {
  const auto rep = mlab::steklov(mlab::StarDomain::ellipse(1.5, 1.0), 48, true);
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  EXPECT_TRUE(rep.raw_pass);
  // Maximum curvature of the ellipse sits at the end of the major axis: a / b^2.
  EXPECT_NEAR(rep.bound, 1.5, 1e-6);
  EXPECT_GT(rep.slack, 0.1);
}

TEST(Steklov, DomainsFromJson) {
  EXPECT_NO_THROW(mlab::StarDomain::from_json({{"shape", "fourier"}, {"R", 1.0}, {"cosines", {0.0, 0.1}}}));
  EXPECT_THROW(mlab::StarDomain::from_json({{"shape", "square"}}), mlab::ConfigError);
  EXPECT_THROW(mlab::StarDomain::from_json({{"radius", 1.0}}), mlab::ConfigError);
  EXPECT_THROW(mlab::StarDomain::from_json({{"shape", "disk"}, {"R", -1.0}}), mlab::ConfigError);
}

}  // namespace
