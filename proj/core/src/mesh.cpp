#include "mlab/mesh.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mlab/curvature.hpp"
#include "mlab/weights.hpp"

namespace mlab {

Eigen::Matrix2d SurfaceMesh::gram(std::size_t t) const {
  const auto& tri = triangles[t];
  const AmbientVector e1 = vertices[static_cast<std::size_t>(tri[1])] - vertices[static_cast<std::size_t>(tri[0])];
  const AmbientVector e2 = vertices[static_cast<std::size_t>(tri[2])] - vertices[static_cast<std::size_t>(tri[0])];
  Eigen::Matrix2d g;
  g(0, 0) = ambient.inner<double>(e1, e1);
  g(0, 1) = g(1, 0) = ambient.inner<double>(e1, e2);
  g(1, 1) = ambient.inner<double>(e2, e2);
  return g;
}

double SurfaceMesh::area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += 0.5 * std::sqrt(std::max(0.0, gram(t).determinant()));
  return a;
}

double SurfaceMesh::max_edge() const {
  double h = 0.0;
  for (const auto& tri : triangles)
    for (int a = 0; a < 3; ++a) {
      const AmbientVector e = vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>((a + 1) % 3)])] -
                              vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
      h = std::max(h, std::sqrt(std::abs(ambient.inner<double>(e, e))));
    }
  return h;
}

MeshQuality inspect(const SurfaceMesh& mesh) {
  MeshQuality q;
  std::map<std::pair<int, int>, int> directed;
  for (const auto& tri : mesh.triangles)
    for (int a = 0; a < 3; ++a) ++directed[{tri[static_cast<std::size_t>(a)], tri[static_cast<std::size_t>((a + 1) % 3)]}];
  q.watertight = true;
  q.oriented = true;
  for (const auto& [edge, count] : directed) {
    const auto back = directed.find({edge.second, edge.first});
    const int rev = back == directed.end() ? 0 : back->second;
    if (count + rev != 2) q.watertight = false;
    if (count != 1 || rev != 1) q.oriented = false;
  }
  q.min_angle_deg = 180.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      const AmbientVector& p = mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
      const AmbientVector u = mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>((a + 1) % 3)])] - p;
      const AmbientVector v = mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>((a + 2) % 3)])] - p;
      const double c = mesh.ambient.inner<double>(u, v) /
                       std::sqrt(mesh.ambient.inner<double>(u, u) * mesh.ambient.inner<double>(v, v));
      q.min_angle_deg = std::min(q.min_angle_deg, std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / std::numbers::pi);
    }
  }
  return q;
}

namespace {

// Typical ambient length of each parameter axis.
std::array<double, 2> axis_lengths(const Immersion& imm) {
  std::array<double, 2> len{0.0, 0.0};
  const auto& dom = imm.domain();
  const int s = 8;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      ParamPoint u(2);
      u[0] = dom[0].lo + (i + 0.5) / s * (dom[0].hi - dom[0].lo);
      u[1] = dom[1].lo + (j + 0.5) / s * (dom[1].hi - dom[1].lo);
      const ImmersionJet jt = jet(imm, u);
      for (std::size_t a = 0; a < 2; ++a)
        len[a] += std::sqrt(std::abs(imm.ambient().inner<double>(jt.d1[a], jt.d1[a]))) *
                  (dom[a].hi - dom[a].lo) / (s * s);
    }
  return len;
}

PointFrame robust_frame(const Immersion& imm, ParamPoint u) {
  try {
    return frame(imm, u);
  } catch (const FrameError&) {
    // Collapsed boundary row (a pole): sample just inside the domain.
    for (int a = 0; a < 2; ++a) {
      const auto& ax = imm.domain()[static_cast<std::size_t>(a)];
      if (ax.periodic) continue;
      const double d = 1e-6 * (ax.hi - ax.lo);
      if (u[a] <= ax.lo + d) u[a] = ax.lo + d;
      if (u[a] >= ax.hi - d) u[a] = ax.hi - d;
    }
    return frame(imm, u);
  }
}

}  // namespace

SurfaceMesh triangulate(const Immersion& imm, int target_vertices) {
  if (imm.m() != 2) throw SizeError("triangulate needs a surface (m = 2)");
  if (imm.codim() != 1) throw SizeError("triangulate needs a hypersurface of a 3-dimensional space");
  if (target_vertices < 16) throw ArgumentError("triangulate needs at least 16 target vertices");
  const auto& dom = imm.domain();
  const auto len = axis_lengths(imm);
  const double ratio = len[0] / len[1];
  std::array<int, 2> cells;
  cells[0] = std::max(3, static_cast<int>(std::lround(std::sqrt(target_vertices * ratio))));
  cells[1] = std::max(3, static_cast<int>(std::lround(target_vertices / static_cast<double>(cells[0]))));
  std::array<int, 2> pts;
  for (std::size_t a = 0; a < 2; ++a) pts[a] = dom[a].periodic ? cells[a] : cells[a] + 1;

  SurfaceMesh mesh;
  mesh.ambient = imm.ambient();
  mesh.label = imm.label();
  mesh.m = 2;
  std::vector<ParamPoint> params;
  std::vector<AmbientVector> raw;
  for (int i = 0; i < pts[0]; ++i)
    for (int j = 0; j < pts[1]; ++j) {
      ParamPoint u(2);
      u[0] = dom[0].lo + (dom[0].hi - dom[0].lo) * i / cells[0];
      u[1] = dom[1].lo + (dom[1].hi - dom[1].lo) * j / cells[1];
      params.push_back(u);
      raw.push_back(imm.point(u));
    }
  auto grid_id = [&](int i, int j) { return i * pts[1] + j; };

  double scale = 0.0;
  for (const auto& x : raw) scale = std::max(scale, x.cwiseAbs().maxCoeff());
  const double tol = 1e-10 * std::max(1.0, scale);
  // Boundary rows of interval axes that collapse to a point become one vertex.
  std::vector<int> remap(raw.size());
  for (std::size_t v = 0; v < raw.size(); ++v) remap[v] = static_cast<int>(v);
  auto collapse = [&](int axis, int index) {
    const int n = pts[static_cast<std::size_t>(1 - axis)];
    auto id = [&](int t) { return axis == 0 ? grid_id(index, t) : grid_id(t, index); };
    for (int t = 1; t < n; ++t)
      if ((raw[static_cast<std::size_t>(id(t))] - raw[static_cast<std::size_t>(id(0))]).norm() > tol) return;
    for (int t = 1; t < n; ++t) remap[static_cast<std::size_t>(id(t))] = remap[static_cast<std::size_t>(id(0))];
  };
  for (int a = 0; a < 2; ++a)
    if (!dom[static_cast<std::size_t>(a)].periodic) {
      collapse(a, 0);
      collapse(a, pts[static_cast<std::size_t>(a)] - 1);
    }
  std::vector<int> compact(raw.size(), -1);
  std::vector<std::size_t> source;
  for (std::size_t v = 0; v < raw.size(); ++v) {
    const auto root = static_cast<std::size_t>(remap[v]);
    if (compact[root] < 0) {
      compact[root] = static_cast<int>(source.size());
      source.push_back(root);
    }
    compact[v] = compact[root];
  }

  for (int i = 0; i < cells[0]; ++i)
    for (int j = 0; j < cells[1]; ++j) {
      const int i1 = (i + 1) % pts[0], j1 = (j + 1) % pts[1];
      const int a = compact[static_cast<std::size_t>(grid_id(i, j))];
      const int b = compact[static_cast<std::size_t>(grid_id(i1, j))];
      const int c = compact[static_cast<std::size_t>(grid_id(i, j1))];
      const int d = compact[static_cast<std::size_t>(grid_id(i1, j1))];
      for (const std::array<int, 3>& tri : {std::array<int, 3>{a, b, d}, std::array<int, 3>{a, d, c}})
        if (tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2]) mesh.triangles.push_back(tri);
    }

  const AmbientVector pole = distance_pole(default_field(imm.ambient()));
  const int n = imm.ambient().ambient_dim();
  AmbientMatrix sig = AmbientMatrix::Zero(n, n);
  for (int c = 0; c < n; ++c) sig(c, c) = imm.ambient().sign(c);
  mesh.vertices.resize(source.size());
  mesh.r.resize(source.size());
  mesh.sigma.resize(source.size());
  mesh.newton.resize(source.size());
  for (std::size_t v = 0; v < source.size(); ++v) {
    const PointFrame fr = robust_frame(imm, params[source[v]]);
    const CurvaturePacket pk = hypersurface_packet(fr);
    mesh.vertices[v] = raw[source[v]];
    mesh.r[v] = polar(imm.ambient(), pole, raw[source[v]]).r;
    mesh.sigma[v] = pk.sigma;
    for (const auto& t : pk.T) mesh.newton[v].push_back(sig * fr.tangent * t * fr.tangent.transpose() * sig);
  }

  // Orient triangles so that the first one agrees with the surface normal.
  if (!mesh.triangles.empty()) {
    const auto& tri = mesh.triangles.front();
    const PointFrame fr = robust_frame(imm, params[source[static_cast<std::size_t>(tri[0])]]);
    if (n == 3 && imm.ambient().is_flat()) {
      const Eigen::Vector3d e1 = (mesh.vertices[static_cast<std::size_t>(tri[1])] - mesh.vertices[static_cast<std::size_t>(tri[0])]).head<3>();
      const Eigen::Vector3d e2 = (mesh.vertices[static_cast<std::size_t>(tri[2])] - mesh.vertices[static_cast<std::size_t>(tri[0])]).head<3>();
      if (e1.cross(e2).dot(fr.normals[0].head<3>()) < 0.0)
        for (auto& t : mesh.triangles) std::swap(t[1], t[2]);
    }
  }
  return mesh;
}

void write_off(const SurfaceMesh& mesh, const std::string& off_path, const std::string& sidecar_path) {
  std::ofstream off(off_path);
  if (!off) throw ConfigError("cannot write " + off_path);
  const int n = mesh.ambient.ambient_dim();
  off.precision(17);
  if (n == 3)
    off << "OFF\n";
  else
    off << "nOFF\n" << n << "\n";
  off << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
  for (const auto& v : mesh.vertices) {
    for (int c = 0; c < n; ++c) off << (c ? " " : "") << v[c];
    off << '\n';
  }
  for (const auto& t : mesh.triangles) off << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';

  nlohmann::json side;
  side["ambient"] = mesh.ambient.name();
  side["label"] = mesh.label;
  side["m"] = mesh.m;
  side["r"] = mesh.r;
  side["sigma"] = mesh.sigma;
  nlohmann::json newton = nlohmann::json::array();
  for (const auto& per : mesh.newton) {
    nlohmann::json mats = nlohmann::json::array();
    for (const auto& t : per) mats.push_back(std::vector<double>(t.data(), t.data() + t.size()));
    newton.push_back(mats);
  }
  side["newton"] = newton;
  std::ofstream js(sidecar_path);
  if (!js) throw ConfigError("cannot write " + sidecar_path);
  js << side.dump(1) << '\n';
}

SurfaceMesh read_off(const std::string& off_path, const std::string& sidecar_path) {
  std::ifstream js(sidecar_path);
  if (!js) throw ConfigError("cannot read sidecar " + sidecar_path);
  nlohmann::json side;
  try {
    js >> side;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("sidecar " + sidecar_path + ": " + e.what());
  }
  SurfaceMesh mesh;
  try {
    mesh.ambient = AmbientSpace::parse(side.at("ambient").get<std::string>());
    mesh.label = side.value("label", std::string("off"));
    mesh.m = side.value("m", 2);
    mesh.r = side.at("r").get<std::vector<double>>();
    mesh.sigma = side.at("sigma").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("sidecar " + sidecar_path + ": " + e.what());
  }
  const int n = mesh.ambient.ambient_dim();

  std::ifstream off(off_path);
  if (!off) throw ConfigError("cannot read " + off_path);
  std::string head;
  off >> head;
  int dim = 3;
  if (head == "nOFF")
    off >> dim;
  else if (head != "OFF")
    throw ConfigError(off_path + ": not an OFF file");
  if (dim != n) throw ConfigError(off_path + ": vertex dimension does not match the sidecar ambient");
  std::size_t nv = 0, nf = 0, ne = 0;
  off >> nv >> nf >> ne;
  mesh.vertices.assign(nv, AmbientVector::Zero(n));
  for (auto& v : mesh.vertices)
    for (int c = 0; c < n; ++c) off >> v[c];
  for (std::size_t f = 0; f < nf; ++f) {
    int count = 0;
    std::array<int, 3> t{};
    off >> count >> t[0] >> t[1] >> t[2];
    if (count != 3) throw ConfigError(off_path + ": only triangular faces are supported");
    for (int idx : t)
      if (idx < 0 || static_cast<std::size_t>(idx) >= nv) throw ConfigError(off_path + ": face index out of range");
    mesh.triangles.push_back(t);
  }
  if (!off) throw ConfigError(off_path + ": truncated file");
  if (mesh.r.size() != nv || mesh.sigma.size() != nv)
    throw ConfigError("sidecar per-vertex arrays do not match the vertex count");
  const auto& newton = side.at("newton");
  if (newton.size() != nv) throw ConfigError("sidecar newton array does not match the vertex count");
  mesh.newton.resize(nv);
  for (std::size_t v = 0; v < nv; ++v)
    for (const auto& flat : newton[v]) {
      const auto vals = flat.get<std::vector<double>>();
      if (vals.size() != static_cast<std::size_t>(n * n)) throw ConfigError("sidecar newton matrix has the wrong size");
      mesh.newton[v].push_back(Eigen::Map<const Eigen::MatrixXd>(vals.data(), n, n));
    }
  return mesh;
}

}  // namespace mlab
