#include "mlab/curvature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mlab {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

namespace {

// e_0..e_m of the given values by e_k <- e_k + x e_{k-1}.
std::vector<double> elementary(const double* x, int count, int skip = -1) {
  std::vector<double> e(static_cast<std::size_t>(count) + 1, 0.0);
  e[0] = 1.0;
  int seen = 0;
  for (int i = 0; i < count; ++i) {
    if (i == skip) continue;
    ++seen;
    for (int k = seen; k >= 1; --k) e[static_cast<std::size_t>(k)] += x[i] * e[static_cast<std::size_t>(k) - 1];
  }
  return e;
}

struct Permutations {
  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
};

const Permutations& permutations(int k) {
  static const auto table = [] {
    std::vector<Permutations> t(8);
    for (int n = 0; n < 8; ++n) {
      std::vector<int> p(static_cast<std::size_t>(n));
      std::iota(p.begin(), p.end(), 0);
      do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)]) ++inversions;
        t[static_cast<std::size_t>(n)].perms.push_back(p);
        t[static_cast<std::size_t>(n)].signs.push_back(inversions % 2 ? -1 : 1);
      } while (std::next_permutation(p.begin(), p.end()));
    }
    return t;
  }();
  return table.at(static_cast<std::size_t>(k));
}

// Calls visit(tuple) for every ordered tuple of `len` distinct indices in
// [0, m) avoiding `avoid`.
template <class Visit>
void distinct_tuples(int m, int len, int avoid, std::vector<int>& tuple, Visit&& visit) {
  if (static_cast<int>(tuple.size()) == len) {
    visit(tuple);
    return;
  }
  for (int i = 0; i < m; ++i) {
    if (i == avoid || std::find(tuple.begin(), tuple.end(), i) != tuple.end()) continue;
    tuple.push_back(i);
    distinct_tuples(m, len, avoid, tuple, visit);
    tuple.pop_back();
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

CurvaturePacket packet(const SmallMatrix& shape_op, double eps_nu) {
  const int m = static_cast<int>(shape_op.rows());
  if (shape_op.cols() != m || m < 1) throw SizeError("shape operator must be square");
  const double asym = (shape_op - shape_op.transpose()).norm();
  if (!(asym <= 1e-10 * (1.0 + shape_op.norm())))
    throw ContractError("shape operator is not symmetric (asymmetry " + std::to_string(asym) + ")");
  const SmallMatrix a = 0.5 * (shape_op + shape_op.transpose());

  Eigen::SelfAdjointEigenSolver<SmallMatrix> eig(a);
  CurvaturePacket p;
  p.m = m;
  p.eps_nu = eps_nu;
  p.lambdas = eig.eigenvalues();
  const SmallMatrix& v = eig.eigenvectors();
  const double* lam = p.lambdas.data();

  p.H = elementary(lam, m);
  p.sigma.resize(p.H.size());
  for (int k = 0; k <= m; ++k)
    p.sigma[static_cast<std::size_t>(k)] = p.H[static_cast<std::size_t>(k)] / binomial(m, k);

  // T_k is diagonal in the eigenbasis with entries e_k of the other
  // eigenvalues.
  std::vector<std::vector<double>> loo;
  for (int i = 0; i < m; ++i) loo.push_back(elementary(lam, m, i));
  for (int k = 0; k <= m; ++k) {
    SmallVector d(m);
    for (int i = 0; i < m; ++i) d[i] = loo[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    p.T.push_back(v * d.asDiagonal() * v.transpose());
  }
  return p;
}

CurvaturePacket hypersurface_packet(const PointFrame& fr) {
  if (fr.codim() != 1) throw SizeError("scalar curvature packet needs a hypersurface");
  return packet(fr.scalar_shape(), fr.eps[0]);
}

NewtonPair epsilon_oracle(const std::vector<SmallMatrix>& ops, int m) {
  if (m > 6) throw SizeError("epsilon oracle is limited to m <= 6");
  if (m < 1) throw SizeError("epsilon oracle needs m >= 1");
  const int k = static_cast<int>(ops.size());
  for (const auto& a : ops)
    if (a.rows() != m || a.cols() != m) throw SizeError("oracle matrices must be m x m");
  NewtonPair out;
  out.T = SmallMatrix::Zero(m, m);
  if (k == 0) {
    out.H = 1.0;
    out.T = SmallMatrix::Identity(m, m);
    return out;
  }
  if (k > m) {
    out.H = 0.0;
    return out;
  }
  const double norm = 1.0 / factorial(k);

  // H_k: sum over ordered distinct I and arrangements J of the same set.
  const Permutations& pk = permutations(k);
  double h = 0.0;
  std::vector<int> tuple;
  distinct_tuples(m, k, -1, tuple, [&](const std::vector<int>& idx) {
    for (std::size_t p = 0; p < pk.perms.size(); ++p) {
      double term = pk.signs[p];
      for (int t = 0; t < k; ++t)
        term *= ops[static_cast<std::size_t>(t)](idx[static_cast<std::size_t>(t)],
                                                idx[static_cast<std::size_t>(pk.perms[p][static_cast<std::size_t>(t)])]);
      h += term;
    }
  });
  out.H = h * norm;

  // T_k: the free pair (i, j) occupies slot 0 of a (k+1)-permutation.
  if (k < m) {
    const Permutations& pk1 = permutations(k + 1);
    for (int i = 0; i < m; ++i) {
      std::vector<int> rest;
      distinct_tuples(m, k, i, rest, [&](const std::vector<int>& idx) {
        std::vector<int> full{i};
        full.insert(full.end(), idx.begin(), idx.end());
        for (std::size_t p = 0; p < pk1.perms.size(); ++p) {
          const auto& perm = pk1.perms[p];
          double term = pk1.signs[p];
          for (int t = 1; t <= k; ++t)
            term *= ops[static_cast<std::size_t>(t - 1)](full[static_cast<std::size_t>(t)],
                                                        full[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])]);
          out.T(i, full[static_cast<std::size_t>(perm[0])]) += term;
        }
      });
    }
    out.T *= norm;
  }
  return out;
}

MultiNormalPacket multi_normal(const std::vector<SmallMatrix>& ops, int m) {
  const int k = static_cast<int>(ops.size());
  if (k > m) throw SizeError("multi-normal order k = " + std::to_string(k) + " exceeds m = " + std::to_string(m));
  MultiNormalPacket p;
  p.shape_ops = ops;
  const NewtonPair np = epsilon_oracle(ops, m);
  p.H = np.H;
  p.sigma = np.H / binomial(m, k);
  p.T = np.T;
  return p;
}

MultiNormalPacket multi_normal(const PointFrame& fr, const std::vector<int>& normal_indices,
                               const AmbientVector* extra) {
  std::vector<SmallMatrix> ops;
  for (int b : normal_indices) {
    if (b < 0 || b >= fr.codim()) throw RangeError("normal index out of range");
    ops.push_back(fr.shape[static_cast<std::size_t>(b)]);
  }
  if (extra) ops.push_back(fr.shape_along(*extra));
  return multi_normal(ops, fr.m);
}

EvenOrderTerms even_order_terms(const PointFrame& fr, int k, const AmbientVector& w) {
  if (k < 0 || k % 2 != 0) throw RangeError("even-order terms need an even k >= 0");
  if (k > fr.m - 1) throw RangeError("even-order terms need k <= m - 1");
  const int pairs = k / 2;
  const int c = fr.codim();
  const SmallMatrix aw = fr.shape_along(w);
  EvenOrderTerms out;
  out.T_k = SmallMatrix::Zero(fr.m, fr.m);
  // Expand each contracted pair A_{ij}.A_{kl} = sum_beta eps_beta A^beta A^beta.
  std::vector<int> choice(static_cast<std::size_t>(pairs), 0);
  while (true) {
    std::vector<SmallMatrix> ops;
    double weight = 1.0;
    for (int b : choice) {
      ops.push_back(fr.shape[static_cast<std::size_t>(b)]);
      ops.push_back(fr.shape[static_cast<std::size_t>(b)]);
      weight *= fr.eps[static_cast<std::size_t>(b)];
    }
    const NewtonPair base = epsilon_oracle(ops, fr.m);
    out.sigma_k += weight * base.H;
    out.T_k += weight * base.T;
    ops.push_back(aw);
    out.sigma_next_dot += weight * epsilon_oracle(ops, fr.m).H;
    int pos = 0;
    while (pos < pairs && ++choice[static_cast<std::size_t>(pos)] == c) choice[static_cast<std::size_t>(pos++)] = 0;
    if (pos == pairs) break;
  }
  out.sigma_k /= binomial(fr.m, k);
  out.sigma_next_dot /= binomial(fr.m, k + 1);
  return out;
}

double parallel_check(const Immersion& imm, int index, int samples) {
  if (imm.codim() < 2) throw SizeError("parallel_check needs codimension >= 2");
  const int m = imm.m();
  std::mt19937_64 rng(0x5eedULL + static_cast<unsigned>(index));
  double worst = 0.0;
  const double h = 1e-3;
  for (int s = 0; s < samples; ++s) {
    ParamPoint u(m);
    for (int i = 0; i < m; ++i) {
      const auto& ax = imm.domain()[static_cast<std::size_t>(i)];
      std::uniform_real_distribution<double> d(ax.lo + 0.05 * (ax.hi - ax.lo),
                                               ax.hi - 0.05 * (ax.hi - ax.lo));
      u[i] = d(rng);
    }
    const PointFrame fr = frame(imm, u);
    if (index < 0 || index >= fr.codim()) throw RangeError("normal index out of range");
    auto normal_at = [&](const ParamPoint& v) {
      return frame(imm, v).normals[static_cast<std::size_t>(index)];
    };
    // Fourth-order central differences of the normal along each coordinate.
    AmbientMatrix dnu(imm.ambient().ambient_dim(), m);
    for (int i = 0; i < m; ++i) {
      ParamPoint p1 = u, m1 = u, p2 = u, m2 = u;
      p1[i] += h;
      m1[i] -= h;
      p2[i] += 2 * h;
      m2[i] -= 2 * h;
      dnu.col(i) = (8.0 * (normal_at(p1) - normal_at(m1)) - (normal_at(p2) - normal_at(m2))) / (12.0 * h);
    }
    const SmallMatrix linv =
        fr.chol_l.triangularView<Eigen::Lower>().solve(SmallMatrix::Identity(m, m));
    const AmbientMatrix directional = dnu * linv.transpose();
    for (int a = 0; a < m; ++a) {
      double q = 0.0;
      for (int b = 0; b < fr.codim(); ++b) {
        const double comp = fr.dot(directional.col(a), fr.normals[static_cast<std::size_t>(b)]);
        q += comp * comp;
      }
      worst = std::max(worst, std::sqrt(q));
    }
  }
  return worst;
}

}  // namespace mlab
