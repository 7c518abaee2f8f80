#include "mlab/immersion.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <sstream>

namespace mlab {

Immersion::Immersion(std::string label, AmbientSpace ambient,
                     std::vector<ParamAxis> domain, ImmersionMap map)
    : label_(std::move(label)),
      ambient_(ambient),
      domain_(std::move(domain)),
      map_(std::move(map)) {
  if (domain_.empty() || static_cast<int>(domain_.size()) > kMaxParams)
    throw SizeError("immersions support 1 to 3 parameters");
  if (m() >= ambient_.intrinsic_dim())
    throw SizeError("immersion dimension must be below the ambient dimension");
}

Immersion& Immersion::with_normals(NormalFrameMap normals) {
  normals_ = std::move(normals);
  return *this;
}
Immersion& Immersion::with_outward(OutwardHint hint) {
  outward_ = std::move(hint);
  return *this;
}
Immersion& Immersion::with_params(nlohmann::json params) {
  params_ = std::move(params);
  return *this;
}
Immersion& Immersion::set_embedded(bool embedded) {
  embedded_ = embedded;
  return *this;
}

AmbientVector Immersion::point(const ParamPoint& u) const {
  DualParams du;
  for (int i = 0; i < m(); ++i) du.push_back(Dual2(u[i]));
  const DualPoint p = map_(du);
  AmbientVector x(ambient_.ambient_dim());
  for (int c = 0; c < ambient_.ambient_dim(); ++c) x[c] = p[static_cast<std::size_t>(c)].value();
  return x;
}

DualPoint ImmersionJet::taylor() const {
  DualPoint p(static_cast<std::size_t>(x.size()));
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    Dual2 v(x[c]);
    for (int i = 0; i < m; ++i) {
      v.set_d(i, d1[static_cast<std::size_t>(i)][c]);
      for (int j = i; j < m; ++j) v.set_dd(i, j, d2(i, j)[c]);
    }
    p[static_cast<std::size_t>(c)] = v;
  }
  return p;
}

ImmersionJet jet(const Immersion& imm, const ParamPoint& u) {
  const int m = imm.m();
  if (u.size() != m) throw ArgumentError("parameter point has the wrong length");
  DualParams du;
  for (int i = 0; i < m; ++i) du.push_back(Dual2::variable(i, u[i]));
  const DualPoint p = imm.eval(du);
  const int n = imm.ambient().ambient_dim();
  if (static_cast<int>(p.size()) != n)
    throw ContractError("immersion map returned a point of the wrong dimension");

  ImmersionJet j;
  j.m = m;
  j.x.resize(n);
  for (int i = 0; i < m; ++i) j.d1.emplace_back(AmbientVector(n));
  for (int k = 0; k < Dual2::kPacked; ++k) j.d2_packed.emplace_back(AmbientVector::Zero(n));
  for (int c = 0; c < n; ++c) {
    const Dual2& v = p[static_cast<std::size_t>(c)];
    j.x[c] = v.value();
    for (int a = 0; a < m; ++a) {
      j.d1[static_cast<std::size_t>(a)][c] = v.d(a);
      for (int b = a; b < m; ++b)
        j.d2_packed[static_cast<std::size_t>(Dual2::packed(a, b))][c] = v.dd(a, b);
    }
  }
  return j;
}

namespace {

// Hypersurface normal: the vector orthogonal (in the signature metric) to all
// rows of `span`, obtained from cofactors of the square matrix [span; e_i].
AmbientVector cofactor_normal(const AmbientSpace& space,
                              const std::vector<AmbientVector>& span) {
  const int n = space.ambient_dim();
  AmbientMatrix mat(n, n);
  for (int r = 0; r < n - 1; ++r) mat.row(r) = span[static_cast<std::size_t>(r)].transpose();
  AmbientVector nu(n);
  for (int i = 0; i < n; ++i) {
    mat.row(n - 1).setZero();
    mat(n - 1, i) = 1.0;
    // Raising the index turns the covector det[span, .] into a vector.
    nu[i] = space.sign(i) * mat.determinant();
  }
  return nu;
}

// Completes `basis` (signature-orthonormal, signs `eps`) with `count` vectors
// taken from the coordinate axes, always taking the axis whose residual has
// the largest |w.w| next.
void complete_frame(const AmbientSpace& space, std::vector<AmbientVector>& basis,
                    std::vector<double>& eps, int count,
                    std::vector<AmbientVector>& normals, std::vector<double>& neps) {
  const int n = space.ambient_dim();
  for (int c = 0; c < count; ++c) {
    double best = 0.0;
    AmbientVector best_w;
    for (int axis = 0; axis < n; ++axis) {
      AmbientVector w = AmbientVector::Zero(n);
      w[axis] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t b = 0; b < basis.size(); ++b)
          w -= eps[b] * inner(space, w, basis[b]) * basis[b];
      const double q = std::abs(inner(space, w, w));
      if (q > best + 1e-12) {
        best = q;
        best_w = w;
      }
    }
    if (best < 1e-10)
      throw SignatureError("normal complement is null in the ambient signature");
    const double e = inner(space, best_w, best_w) > 0 ? 1.0 : -1.0;
    const AmbientVector nu = best_w / std::sqrt(best);
    basis.push_back(nu);
    eps.push_back(e);
    normals.push_back(nu);
    neps.push_back(e);
  }
}

}  // namespace

PointFrame frame(const Immersion& imm, const ParamPoint& u) {
  const AmbientSpace& space = imm.ambient();
  const int n = space.ambient_dim();
  PointFrame fr;
  fr.u = u;
  for (int i = 0; i < n; ++i) fr.signs.push_back(space.sign(i));
  fr.jet = jet(imm, u);
  const int m = fr.jet.m;
  fr.m = m;

  fr.g.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      fr.g(i, j) = inner(space, fr.jet.d1[static_cast<std::size_t>(i)],
                         fr.jet.d1[static_cast<std::size_t>(j)]);

  Eigen::SelfAdjointEigenSolver<SmallMatrix> eig(fr.g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 1e-13 * std::max(hi, 1e-300))) {
    std::ostringstream os;
    os << "induced metric is degenerate or not positive definite at u = ("
       << u.transpose() << "), eigenvalues [" << lo << ", " << hi << "]";
    throw FrameError(os.str(), lo > 0 ? hi / lo : std::numeric_limits<double>::infinity());
  }
  Eigen::LLT<SmallMatrix> llt(fr.g);
  fr.chol_l = llt.matrixL();
  fr.g_inv = llt.solve(SmallMatrix::Identity(m, m));
  fr.sqrt_det_g = fr.chol_l.diagonal().prod();

  AmbientMatrix d1(n, m);
  for (int i = 0; i < m; ++i) d1.col(i) = fr.jet.d1[static_cast<std::size_t>(i)];
  // e = d1 L^{-T}
  const SmallMatrix linv = fr.chol_l.triangularView<Eigen::Lower>().solve(
      SmallMatrix::Identity(m, m));
  fr.tangent = d1 * linv.transpose();

  const int codim = imm.codim();
  if (imm.has_normal_frame()) {
    fr.normals = imm.analytic_normals(u);
    if (static_cast<int>(fr.normals.size()) != codim)
      throw ContractError("analytic normal frame has the wrong number of vectors");
    for (const auto& nu : fr.normals) fr.eps.push_back(inner(space, nu, nu) > 0 ? 1.0 : -1.0);
  } else if (codim == 1) {
    std::vector<AmbientVector> span;
    for (int i = 0; i < m; ++i) span.push_back(fr.tangent.col(i));
    if (!space.is_flat()) span.push_back(fr.jet.x);
    AmbientVector nu = cofactor_normal(space, span);
    const double q = inner(space, nu, nu);
    if (std::abs(q) < 1e-24)
      throw SignatureError("hypersurface normal is null in the ambient signature");
    nu /= std::sqrt(std::abs(q));
    const double e = q > 0 ? 1.0 : -1.0;
    if (imm.has_outward()) {
      const double s = e * inner(space, nu, imm.outward(fr.jet.x));
      if (s < 0) {
        nu = -nu;
        fr.orientation = -1;
      }
    }
    fr.normals.push_back(nu);
    fr.eps.push_back(e);
  } else {
    std::vector<AmbientVector> basis;
    std::vector<double> beps;
    for (int a = 0; a < m; ++a) {
      basis.push_back(fr.tangent.col(a));
      beps.push_back(1.0);
    }
    if (!space.is_flat()) {
      basis.push_back(fr.jet.x);
      beps.push_back(space.mu());
    }
    complete_frame(space, basis, beps, codim, fr.normals, fr.eps);
  }

  for (std::size_t b = 0; b < fr.normals.size(); ++b) {
    SmallMatrix a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        a(i, j) = -inner(space, fr.jet.d2(i, j), fr.normals[b]);
        a(j, i) = a(i, j);
      }
    fr.shape_coord.push_back(a);
    SmallMatrix s = linv * a * linv.transpose();
    s = 0.5 * (s + s.transpose()).eval();
    fr.shape.push_back(s);
  }
  return fr;
}

double PointFrame::dot(const AmbientVector& u, const AmbientVector& v) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    acc += signs[static_cast<std::size_t>(i)] * u[i] * v[i];
  return acc;
}

SmallVector PointFrame::tangent_coords(const AmbientVector& v) const {
  SmallVector c(m);
  for (int a = 0; a < m; ++a) c[a] = dot(tangent.col(a), v);
  return c;
}

SmallMatrix PointFrame::shape_along(const AmbientVector& w) const {
  SmallMatrix s = SmallMatrix::Zero(m, m);
  for (std::size_t b = 0; b < normals.size(); ++b)
    s += eps[b] * dot(w, normals[b]) * shape[b];
  return s;
}

SmallVector PointFrame::orthonormal_gradient(const SmallVector& coord_grad) const {
  return chol_l.triangularView<Eigen::Lower>().solve(coord_grad);
}

}  // namespace mlab
