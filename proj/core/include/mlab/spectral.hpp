#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "mlab/identities.hpp"
#include "mlab/mesh.hpp"

namespace mlab {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct EigenReport {
  std::string check;  // lambda1, garay, steklov
  std::string surface;
  nlohmann::json params = nlohmann::json::object();
  int k = 0;
  double lambda1 = 0.0;         // finest mesh
  double coarse_lambda1 = 0.0;  // previous mesh level (0 when not refined)
  double extrapolated = 0.0;    // Richardson, assuming O(h^2)
  double discretization_error = 0.0;  // relative estimate for lambda1
  // Theorem sides: lhs <= rhs. For lambda1 these are lambda1 and the bound.
  double lhs = 0.0;
  double rhs = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // rhs - lhs
  double adjusted_threshold = 0.0;  // rhs * (1 + 5 * discretization_error)
  bool raw_pass = false;
  bool adjusted_pass = false;
  std::size_t vertices = 0;
  double mesh_size = 0.0;
  double orthogonality = 0.0;      // mass-weighted cosine with constants
  double rayleigh_residual = 0.0;  // |B(u,u)/M(u,u) - lambda1|
  int iterations = 0;
  Verdict verdict = Verdict::Fail;
  std::string note;
};

struct SpectralOptions {
  int vertices = 10000;   // finest mesh; the coarse level uses a quarter
  bool richardson = true;
  Execution exec;
};

struct FemSystem {
  SparseMatrix stiffness;
  SparseMatrix mass;
};

// P1 stiffness int <T_k grad u, grad v> and consistent mass on a mesh.
// Throws AssemblyError when an element tensor is not positive definite.
FemSystem assemble(const SurfaceMesh& mesh, int k, const Execution& exec = {});

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;
};

// Smallest eigenvalue of K u = lambda M u on the M-orthogonal complement of
// the constants, by shift-invert subspace iteration (shift -1) with sparse
// LDL^T. `start` columns seed the subspace.
EigenPair first_nonzero_eigenpair(const SparseMatrix& stiffness, const SparseMatrix& mass,
                                  const Eigen::MatrixXd& start, double tol = 1e-13,
                                  int max_iterations = 2000);

// lambda1(T_k) <= (m - k) C(m, k) max(K sigma_k + sigma_{k+2}).
EigenReport lambda1(const Immersion& imm, int k, const SpectralOptions& opts = {});
EigenReport lambda1(const SurfaceMesh& mesh, int k, const SpectralOptions& opts = {});

// n lambda(T_k) Vol(Omega) <= (m - k) C(m, k) max sigma_1 int sigma_k, flat R^3.
EigenReport garay(const Immersion& imm, int k, const SpectralOptions& opts = {},
                  const QuadratureSpec& q = {});

// Star-shaped planar domain r < rho(theta).
struct StarDomain {
  std::string label = "disk";
  std::function<double(double)> rho;
  std::function<double(double)> drho;
  std::function<double(double)> ddrho;
  nlohmann::json params = nlohmann::json::object();

  static StarDomain disk(double radius);
  static StarDomain ellipse(double a, double b);
  // rho = R (1 + sum_j c_j cos(j theta)).
  static StarDomain fourier(double radius, const std::vector<double>& cosines);
  // {"shape": "disk"|"ellipse"|"fourier", ...}
  static StarDomain from_json(const nlohmann::json& j);

  double curvature(double theta) const;
};

struct DiskMesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary;  // ordered boundary loop
};
// Concentric rings: ring i has 6 i vertices; ring `rings` lies on the boundary.
DiskMesh disk_mesh(const StarDomain& domain, int rings);

// p_1 from the Dirichlet-to-Neumann Schur complement; verdict on
// p_1 int X.nu <= 2 max sigma_1 Vol, i.e. p_1 <= max curvature.
EigenReport steklov(const StarDomain& domain, int rings = 48, bool richardson = true);

}  // namespace mlab
