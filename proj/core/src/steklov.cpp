#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "mlab/spectral.hpp"

namespace mlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kBoundarySamples = 4096;

void require_star_shaped(const StarDomain& d) {
  for (int i = 0; i < kBoundarySamples; ++i) {
    const double t = kTwoPi * i / kBoundarySamples;
    const double r = d.rho(t);
    if (!(r > 0.0) || !std::isfinite(r)) {
      std::ostringstream os;
      os << "boundary of '" << d.label << "' is not star-shaped about the origin (rho(" << t << ") = " << r << ")";
      throw ConfigError(os.str());
    }
  }
}

}  // namespace

double StarDomain::curvature(double t) const {
  const double r = rho(t), r1 = drho(t), r2 = ddrho(t);
  return (r * r + 2.0 * r1 * r1 - r * r2) / std::pow(r * r + r1 * r1, 1.5);
}

StarDomain StarDomain::disk(double radius) {
  if (!(radius > 0.0)) throw ConfigError("disk radius must be positive");
  StarDomain d;
  d.label = "disk";
  d.params = {{"shape", "disk"}, {"R", radius}};
  d.rho = [radius](double) { return radius; };
  d.drho = [](double) { return 0.0; };
  d.ddrho = [](double) { return 0.0; };
  return d;
}

StarDomain StarDomain::ellipse(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ConfigError("ellipse semi-axes must be positive");
  StarDomain d;
  d.label = "ellipse";
  d.params = {{"shape", "ellipse"}, {"a", a}, {"b", b}};
  const double c = a * a - b * b;
  auto q = [a, b](double t) { return b * b * std::cos(t) * std::cos(t) + a * a * std::sin(t) * std::sin(t); };
  d.rho = [=](double t) { return a * b / std::sqrt(q(t)); };
  d.drho = [=](double t) { return -0.5 * a * b * std::pow(q(t), -1.5) * c * std::sin(2 * t); };
  d.ddrho = [=](double t) {
    const double q1 = c * std::sin(2 * t), q2 = 2.0 * c * std::cos(2 * t);
    return a * b * (0.75 * std::pow(q(t), -2.5) * q1 * q1 - 0.5 * std::pow(q(t), -1.5) * q2);
  };
  return d;
}

StarDomain StarDomain::fourier(double radius, const std::vector<double>& cs) {
  if (!(radius > 0.0)) throw ConfigError("fourier domain radius must be positive");
  StarDomain d;
  d.label = "fourier";
  d.params = {{"shape", "fourier"}, {"R", radius}, {"cosines", cs}};
  d.rho = [=](double t) {
    double s = 1.0;
    for (std::size_t j = 0; j < cs.size(); ++j) s += cs[j] * std::cos((j + 1.0) * t);
    return radius * s;
  };
  d.drho = [=](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < cs.size(); ++j) s -= (j + 1.0) * cs[j] * std::sin((j + 1.0) * t);
    return radius * s;
  };
  d.ddrho = [=](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < cs.size(); ++j) s -= (j + 1.0) * (j + 1.0) * cs[j] * std::cos((j + 1.0) * t);
    return radius * s;
  };
  require_star_shaped(d);
  return d;
}

StarDomain StarDomain::from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("planar domain must be an object");
    for (const auto& item : j.items())
      if (item.key() != "shape" && item.key() != "R" && item.key() != "a" && item.key() != "b" &&
          item.key() != "cosines")
        throw ConfigError("planar domain: unknown key '" + item.key() + "' (shape, R, a, b, cosines)");
    const std::string shape = j.value("shape", std::string("disk"));
    if (shape == "disk") return disk(j.value("R", 1.0));
    if (shape == "ellipse") return ellipse(j.value("a", 1.5), j.value("b", 1.0));
    if (shape == "fourier")
      return fourier(j.value("R", 1.0), j.value("cosines", std::vector<double>{}));
    throw ConfigError("unknown planar domain shape '" + shape + "' (disk, ellipse, fourier)");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("planar domain: ") + e.what());
  }
}

DiskMesh disk_mesh(const StarDomain& domain, int rings) {
  if (rings < 2) throw ArgumentError("disk mesh needs at least two rings");
  require_star_shaped(domain);
  DiskMesh mesh;
  std::vector<std::vector<int>> ring(static_cast<std::size_t>(rings + 1));
  mesh.vertices.push_back(Eigen::Vector2d::Zero());
  ring[0] = {0};
  for (int i = 1; i <= rings; ++i) {
    const int count = 6 * i;
    for (int j = 0; j < count; ++j) {
      const double t = kTwoPi * j / count;
      const double r = domain.rho(t) * i / rings;
      ring[static_cast<std::size_t>(i)].push_back(static_cast<int>(mesh.vertices.size()));
      mesh.vertices.emplace_back(r * std::cos(t), r * std::sin(t));
    }
  }
  // Stitch consecutive rings by advancing whichever side has the smaller
  // next angle.
  for (int i = 1; i <= rings; ++i) {
    const auto& in = ring[static_cast<std::size_t>(i - 1)];
    const auto& out = ring[static_cast<std::size_t>(i)];
    const int na = static_cast<int>(in.size()), nb = static_cast<int>(out.size());
    int ia = 0, ib = 0;
    while (ib < nb || (na > 1 && ia < na)) {
      const double next_in = na > 1 && ia < na ? static_cast<double>(ia + 1) / na : INFINITY;
      const double next_out = ib < nb ? static_cast<double>(ib + 1) / nb : INFINITY;
      if (next_out <= next_in) {
        mesh.triangles.push_back({in[static_cast<std::size_t>(ia % na)], out[static_cast<std::size_t>(ib % nb)],
                                  out[static_cast<std::size_t>((ib + 1) % nb)]});
        ++ib;
      } else {
        mesh.triangles.push_back({in[static_cast<std::size_t>(ia % na)], out[static_cast<std::size_t>(ib % nb)],
                                  in[static_cast<std::size_t>((ia + 1) % na)]});
        ++ia;
      }
    }
  }
  mesh.boundary = ring[static_cast<std::size_t>(rings)];
  return mesh;
}

namespace {

struct SteklovSolve {
  double p1 = 0.0;
  double orthogonality = 0.0;
  double rayleigh = 0.0;
  std::size_t vertices = 0;
  double h = 0.0;
};

SteklovSolve solve_steklov(const StarDomain& domain, int rings) {
  const DiskMesh mesh = disk_mesh(domain, rings);
  const auto nv = static_cast<Eigen::Index>(mesh.vertices.size());
  std::vector<Eigen::Triplet<double>> kt;
  double h = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Eigen::Vector2d p0 = mesh.vertices[static_cast<std::size_t>(tri[0])];
    Eigen::Matrix2d e;
    e.col(0) = mesh.vertices[static_cast<std::size_t>(tri[1])] - p0;
    e.col(1) = mesh.vertices[static_cast<std::size_t>(tri[2])] - p0;
    const Eigen::Matrix2d g = e.transpose() * e;
    const double area = 0.5 * std::abs(e.determinant());
    if (!(area > 0.0)) throw AssemblyError("degenerate triangle in the disk mesh");
    Eigen::Matrix<double, 2, 3> d;
    d << -1, 1, 0, -1, 0, 1;
    const Eigen::Matrix3d kl = area * d.transpose() * g.inverse() * d;
    for (int a = 0; a < 3; ++a) {
      h = std::max(h, (mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])] -
                       mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>((a + 1) % 3)])]).norm());
      for (int b = 0; b < 3; ++b) kt.emplace_back(tri[static_cast<std::size_t>(a)], tri[static_cast<std::size_t>(b)], kl(a, b));
    }
  }
  SparseMatrix k(nv, nv);
  k.setFromTriplets(kt.begin(), kt.end());

  // Interior vertices first, then the boundary loop.
  const auto nb = static_cast<Eigen::Index>(mesh.boundary.size());
  const Eigen::Index ni = nv - nb;
  std::vector<Eigen::Index> local(static_cast<std::size_t>(nv), -1);
  for (Eigen::Index b = 0; b < nb; ++b) local[static_cast<std::size_t>(mesh.boundary[static_cast<std::size_t>(b)])] = ni + b;
  Eigen::Index next = 0;
  for (Eigen::Index v = 0; v < nv; ++v)
    if (local[static_cast<std::size_t>(v)] < 0) local[static_cast<std::size_t>(v)] = next++;
  std::vector<Eigen::Triplet<double>> ii, ib;
  Eigen::MatrixXd kbb = Eigen::MatrixXd::Zero(nb, nb);
  for (int c = 0; c < k.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(k, c); it; ++it) {
      const Eigen::Index r = local[static_cast<std::size_t>(it.row())];
      const Eigen::Index s = local[static_cast<std::size_t>(it.col())];
      if (r < ni && s < ni) ii.emplace_back(r, s, it.value());
      else if (r < ni && s >= ni) ib.emplace_back(r, s - ni, it.value());
      else if (r >= ni && s >= ni) kbb(r - ni, s - ni) += it.value();
    }
  SparseMatrix kii(ni, ni), kib(ni, nb);
  kii.setFromTriplets(ii.begin(), ii.end());
  kib.setFromTriplets(ib.begin(), ib.end());
  Eigen::SimplicialLDLT<SparseMatrix> solver(kii);
  if (solver.info() != Eigen::Success) throw SolverError("interior stiffness factorization failed");
  const Eigen::MatrixXd x = solver.solve(Eigen::MatrixXd(kib));
  Eigen::MatrixXd schur = kbb - Eigen::MatrixXd(kib.transpose()) * x;
  schur = 0.5 * (schur + schur.transpose());

  Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(nb, nb);
  for (Eigen::Index b = 0; b < nb; ++b) {
    const Eigen::Index c = (b + 1) % nb;
    const double len = (mesh.vertices[static_cast<std::size_t>(mesh.boundary[static_cast<std::size_t>(b)])] -
                        mesh.vertices[static_cast<std::size_t>(mesh.boundary[static_cast<std::size_t>(c)])]).norm();
    bm(b, b) += len / 3.0;
    bm(c, c) += len / 3.0;
    bm(b, c) += len / 6.0;
    bm(c, b) += len / 6.0;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(schur, bm);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "dense Steklov eigensolver failed (" << nb << " boundary unknowns, info " << es.info() << ")";
    throw SolverError(os.str());
  }
  SteklovSolve out;
  out.p1 = es.eigenvalues()[1];
  const Eigen::VectorXd u = es.eigenvectors().col(1);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(nb);
  const Eigen::VectorXd bu = bm * u;
  out.orthogonality = std::abs(ones.dot(bu)) / std::sqrt(ones.dot(bm * ones) * u.dot(bu));
  out.rayleigh = std::abs(u.dot(schur * u) / u.dot(bu) - out.p1);
  out.vertices = static_cast<std::size_t>(nv);
  out.h = h;
  return out;
}

}  // namespace

EigenReport steklov(const StarDomain& domain, int rings, bool refine) {
  require_star_shaped(domain);
  EigenReport rep;
  rep.check = "steklov";
  rep.surface = domain.label;
  rep.params = domain.params;
  rep.k = -1;
  // Boundary integrals of the smooth domain: Vol = (1/2) int rho^2 and
  // int X.nu ds = int rho^2 dtheta; periodic trapezoid rule.
  double vol = 0.0, max_kappa = -INFINITY;
  for (int i = 0; i < kBoundarySamples; ++i) {
    const double t = kTwoPi * i / kBoundarySamples;
    vol += 0.5 * domain.rho(t) * domain.rho(t) * kTwoPi / kBoundarySamples;
    max_kappa = std::max(max_kappa, domain.curvature(t));
  }
  const double support = 2.0 * vol;
  const SteklovSolve fine = solve_steklov(domain, rings);
  rep.lambda1 = rep.extrapolated = fine.p1;
  rep.vertices = fine.vertices;
  rep.mesh_size = fine.h;
  rep.orthogonality = fine.orthogonality;
  rep.rayleigh_residual = fine.rayleigh;
  if (refine) {
    const SteklovSolve coarse = solve_steklov(domain, std::max(2, rings / 2));
    rep.coarse_lambda1 = coarse.p1;
    rep.extrapolated = fine.p1 + (fine.p1 - coarse.p1) / 3.0;
    rep.discretization_error = std::abs(fine.p1 - coarse.p1) / 3.0 / fine.p1;
  }
  rep.bound = max_kappa;
  rep.lhs = rep.lambda1 * support;
  rep.rhs = 2.0 * max_kappa * vol;
  rep.slack = rep.rhs - rep.lhs;
  rep.adjusted_threshold = rep.rhs * (1.0 + 5.0 * rep.discretization_error);
  rep.raw_pass = rep.lhs <= rep.rhs;
  rep.adjusted_pass = rep.lhs <= rep.adjusted_threshold;
  rep.verdict = rep.adjusted_pass ? Verdict::Pass : Verdict::Fail;
  rep.note = rep.adjusted_pass ? "" : "inequality violated beyond the discretization allowance";
  return rep;
}

}  // namespace mlab
