#include "mlab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace mlab {

FemSystem assemble(const SurfaceMesh& mesh, int k, const Execution& exec) {
  const std::size_t nt = mesh.triangles.size();
  const int m = mesh.m;
  if (k < 0 || k > m) throw RangeError("Newton tensor order out of range");
  for (const auto& per : mesh.newton)
    if (static_cast<int>(per.size()) <= k) throw ArgumentError("mesh lacks Newton tensor data for this k");
  const int n = mesh.ambient.ambient_dim();
  AmbientMatrix sig = AmbientMatrix::Zero(n, n);
  for (int c = 0; c < n; ++c) sig(c, c) = mesh.ambient.sign(c);

  std::vector<Eigen::Matrix3d> kl(nt), ml(nt);
  std::vector<int> bad(nt, 0);
  parallel_for(nt, exec, [&](std::size_t b, std::size_t e) {
    Eigen::Matrix<double, 2, 3> d;
    d << -1, 1, 0, -1, 0, 1;
    for (std::size_t t = b; t < e; ++t) {
      const auto& tri = mesh.triangles[t];
      const AmbientVector& p0 = mesh.vertices[static_cast<std::size_t>(tri[0])];
      AmbientMatrix edges(n, 2);
      edges.col(0) = mesh.vertices[static_cast<std::size_t>(tri[1])] - p0;
      edges.col(1) = mesh.vertices[static_cast<std::size_t>(tri[2])] - p0;
      const Eigen::Matrix2d g = mesh.gram(t);
      // T = t0 Id + (T - t0 Id); the isotropic part uses the exact triangle
      // metric so that k = 0 reproduces the cotangent Laplacian.
      double t0 = 0.0;
      AmbientMatrix rest = AmbientMatrix::Zero(n, n);
      for (int v : tri) {
        const auto& per = mesh.newton[static_cast<std::size_t>(v)];
        const double tv = (sig * per[static_cast<std::size_t>(k)]).trace() / m;
        t0 += tv / 3.0;
        rest += (per[static_cast<std::size_t>(k)] - tv * per[0]) / 3.0;
      }
      const Eigen::Matrix2d bt = t0 * g + edges.transpose() * rest * edges;
      const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(bt, Eigen::EigenvaluesOnly);
      if (!(es.eigenvalues().minCoeff() > 0.0)) bad[t] = 1;
      const double area = 0.5 * std::sqrt(std::max(0.0, g.determinant()));
      const Eigen::Matrix2d gi = g.inverse();
      kl[t] = area * d.transpose() * gi * bt * gi * d;
      ml[t] = area / 12.0 * (Eigen::Matrix3d::Ones() + Eigen::Matrix3d::Identity());
    }
  });
  for (std::size_t t = 0; t < nt; ++t)
    if (bad[t]) {
      std::ostringstream os;
      os << "element tensor T_" << k << " is not positive definite on triangle " << t;
      throw AssemblyError(os.str());
    }
  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(9 * nt);
  mt.reserve(9 * nt);
  for (std::size_t t = 0; t < nt; ++t)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const int i = mesh.triangles[t][static_cast<std::size_t>(a)];
        const int j = mesh.triangles[t][static_cast<std::size_t>(b)];
        kt.emplace_back(i, j, kl[t](a, b));
        mt.emplace_back(i, j, ml[t](a, b));
      }
  const auto nv = static_cast<Eigen::Index>(mesh.size());
  FemSystem sys;
  sys.stiffness.resize(nv, nv);
  sys.mass.resize(nv, nv);
  sys.stiffness.setFromTriplets(kt.begin(), kt.end());
  sys.mass.setFromTriplets(mt.begin(), mt.end());
  return sys;
}

EigenPair first_nonzero_eigenpair(const SparseMatrix& stiffness, const SparseMatrix& mass,
                                  const Eigen::MatrixXd& start, double tol, int max_iterations) {
  const Eigen::Index nv = stiffness.rows();
  if (nv < 3) throw SizeError("eigenproblem too small");
  const SparseMatrix shifted = stiffness + mass;
  Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
  if (solver.info() != Eigen::Success) throw SolverError("factorization of K + M failed");

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(nv);
  const Eigen::VectorXd mones = mass * ones;
  const double mtot = ones.dot(mones);
  auto deflate = [&](Eigen::MatrixXd& x) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) x.col(c) -= (mones.dot(x.col(c)) / mtot) * ones;
  };

  Eigen::MatrixXd x = start;
  deflate(x);
  double prev = INFINITY;
  EigenPair out;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::MatrixXd y = solver.solve(mass * x);
    deflate(y);
    const Eigen::MatrixXd kr = y.transpose() * stiffness * y;
    const Eigen::MatrixXd mr = y.transpose() * mass * y;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> rr(0.5 * (kr + kr.transpose()),
                                                                 0.5 * (mr + mr.transpose()));
    if (rr.info() != Eigen::Success) throw SolverError("Rayleigh-Ritz step failed");
    x = y * rr.eigenvectors();
    for (Eigen::Index c = 0; c < x.cols(); ++c) x.col(c) /= std::sqrt(x.col(c).dot(mass * x.col(c)));
    const double lam = rr.eigenvalues()[0];
    out.value = lam;
    out.iterations = it;
    if (std::abs(lam - prev) <= tol * std::abs(lam)) {
      out.vector = x.col(0);
      return out;
    }
    prev = lam;
  }
  std::ostringstream os;
  os << "subspace iteration did not converge in " << max_iterations << " iterations (last estimate "
     << out.value << ", change " << std::abs(out.value - prev) << ")";
  throw SolverError(os.str());
}

namespace {

Eigen::MatrixXd start_block(const SurfaceMesh& mesh) {
  const int n = mesh.ambient.ambient_dim();
  const auto nv = static_cast<Eigen::Index>(mesh.size());
  std::vector<Eigen::VectorXd> cols;
  for (int c = 0; c < n; ++c) {
    Eigen::VectorXd v(nv);
    for (Eigen::Index i = 0; i < nv; ++i) v[i] = mesh.vertices[static_cast<std::size_t>(i)][c];
    cols.push_back(v);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n && cols.size() < 8; ++b) cols.push_back(cols[static_cast<std::size_t>(a)].cwiseProduct(cols[static_cast<std::size_t>(b)]));
  Eigen::MatrixXd x(nv, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) x.col(static_cast<Eigen::Index>(c)) = cols[c];
  return x;
}

struct MeshSolve {
  double lambda = 0.0;
  double orthogonality = 0.0;
  double rayleigh = 0.0;
  int iterations = 0;
};

MeshSolve solve_mesh(const SurfaceMesh& mesh, int k, const Execution& exec) {
  const FemSystem sys = assemble(mesh, k, exec);
  const EigenPair ep = first_nonzero_eigenpair(sys.stiffness, sys.mass, start_block(mesh));
  MeshSolve s;
  s.lambda = ep.value;
  s.iterations = ep.iterations;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.mass.rows());
  const Eigen::VectorXd mu = sys.mass * ep.vector;
  s.orthogonality = std::abs(ones.dot(mu)) / std::sqrt(ones.dot(sys.mass * ones) * ep.vector.dot(mu));
  s.rayleigh = std::abs(ep.vector.dot(sys.stiffness * ep.vector) / ep.vector.dot(mu) - ep.value);
  return s;
}

void richardson(EigenReport& rep, double coarse, double fine) {
  rep.coarse_lambda1 = coarse;
  rep.lambda1 = fine;
  rep.extrapolated = fine + (fine - coarse) / 3.0;
  rep.discretization_error = std::abs(fine - coarse) / 3.0 / std::abs(fine);
}

void decide(EigenReport& rep) {
  rep.slack = rep.rhs - rep.lhs;
  rep.adjusted_threshold = rep.rhs * (1.0 + 5.0 * rep.discretization_error);
  rep.raw_pass = rep.lhs <= rep.rhs;
  rep.adjusted_pass = rep.lhs <= rep.adjusted_threshold;
  rep.verdict = rep.adjusted_pass ? Verdict::Pass : Verdict::Fail;
  rep.note = rep.adjusted_pass ? "" : "inequality violated beyond the discretization allowance";
}

// Theorem hypotheses for lambda1 on the mesh vertices; empty when satisfied.
std::string lambda1_hypotheses(const SurfaceMesh& mesh, int k) {
  std::ostringstream why;
  for (std::size_t v = 0; v < mesh.size(); ++v) {
    const double s = mesh.sigma[v].at(static_cast<std::size_t>(k + 2));
    if (!(s > 0.0)) {
      why << "sigma_" << k + 2 << " = " << s << " is not positive at vertex " << v;
      return why.str();
    }
    if (mesh.ambient.is_round_sphere() && mesh.r[v] > std::numbers::pi / 4) {
      why << "surface leaves the geodesic ball of radius pi/4 (r = " << mesh.r[v] << ")";
      return why.str();
    }
  }
  return {};
}

double lambda1_bound(const SurfaceMesh& mesh, int k) {
  const int m = mesh.m;
  const double kc = mesh.ambient.curvature();
  double worst = -INFINITY;
  for (const auto& s : mesh.sigma)
    worst = std::max(worst, kc * s[static_cast<std::size_t>(k)] + s[static_cast<std::size_t>(k + 2)]);
  return (m - k) * binomial(m, k) * worst;
}

void check_lambda1_k(int k, int m) {
  if (k < 0 || k + 2 > m)
    throw RangeError("lambda1 needs sigma_{k+2}, so 0 <= k <= m - 2 (k = 0 for surfaces)");
}

}  // namespace

EigenReport lambda1(const SurfaceMesh& mesh, int k, const SpectralOptions& opts) {
  check_lambda1_k(k, mesh.m);
  EigenReport rep;
  rep.check = "lambda1";
  rep.surface = mesh.label;
  rep.k = k;
  rep.vertices = mesh.size();
  rep.mesh_size = mesh.max_edge();
  rep.bound = lambda1_bound(mesh, k);
  const std::string why = lambda1_hypotheses(mesh, k);
  if (!why.empty()) {
    rep.verdict = Verdict::HypothesisViolation;
    rep.note = why;
    return rep;
  }
  const MeshSolve s = solve_mesh(mesh, k, opts.exec);
  rep.lambda1 = rep.extrapolated = s.lambda;
  rep.orthogonality = s.orthogonality;
  rep.rayleigh_residual = s.rayleigh;
  rep.iterations = s.iterations;
  rep.lhs = s.lambda;
  rep.rhs = rep.bound;
  decide(rep);
  return rep;
}

EigenReport lambda1(const Immersion& imm, int k, const SpectralOptions& opts) {
  check_lambda1_k(k, imm.m());
  const SurfaceMesh fine = triangulate(imm, opts.vertices);
  EigenReport rep = lambda1(fine, k, opts);
  rep.params = imm.params();
  if (rep.verdict == Verdict::HypothesisViolation || !opts.richardson) return rep;
  const SurfaceMesh coarse = triangulate(imm, std::max(16, opts.vertices / 4));
  const MeshSolve c = solve_mesh(coarse, k, opts.exec);
  richardson(rep, c.lambda, rep.lambda1);
  decide(rep);
  return rep;
}

EigenReport garay(const Immersion& imm, int k, const SpectralOptions& opts, const QuadratureSpec& q) {
  const AmbientSpace& space = imm.ambient();
  if (!(space.is_flat() && space.q() == 0 && space.ambient_dim() == 3))
    throw ConfigError("garay is checked for embedded surfaces of R^3");
  if (!imm.embedded()) throw ConfigError("garay needs a closed embedded surface");
  const int m = imm.m();
  if (k < 0 || k > m - 1) throw RangeError("garay needs 0 <= k <= m - 1");
  EigenReport rep;
  rep.check = "garay";
  rep.surface = imm.label();
  rep.params = imm.params();
  rep.k = k;

  const SurfaceMesh fine = triangulate(imm, opts.vertices);
  rep.vertices = fine.size();
  rep.mesh_size = fine.max_edge();
  double max_s1 = -INFINITY;
  for (std::size_t v = 0; v < fine.size(); ++v) {
    max_s1 = std::max(max_s1, fine.sigma[v][1]);
    if (!(fine.sigma[v][static_cast<std::size_t>(k)] > 0.0)) {
      rep.verdict = Verdict::HypothesisViolation;
      rep.note = "sigma_" + std::to_string(k) + " is not positive at a vertex";
      return rep;
    }
  }
  IdentityOptions io;
  io.quadrature = q;
  io.exec = opts.exec;
  const double vol = weighted_volume(imm, default_field(space), io);
  const double isk = integrate_scalar(imm, make_grid(imm, q), [&](const PointFrame& fr) {
    return hypersurface_packet(fr).sigma_at(k);
  }, opts.exec);

  const MeshSolve s = solve_mesh(fine, k, opts.exec);
  rep.lambda1 = rep.extrapolated = s.lambda;
  rep.orthogonality = s.orthogonality;
  rep.rayleigh_residual = s.rayleigh;
  rep.iterations = s.iterations;
  if (opts.richardson) {
    const SurfaceMesh coarse = triangulate(imm, std::max(16, opts.vertices / 4));
    richardson(rep, solve_mesh(coarse, k, opts.exec).lambda, s.lambda);
  }
  const int n = space.ambient_dim();
  rep.lhs = n * rep.lambda1 * vol;
  rep.rhs = (m - k) * binomial(m, k) * max_s1 * isk;
  rep.bound = rep.rhs / (n * vol);
  decide(rep);
  return rep;
}

}  // namespace mlab
