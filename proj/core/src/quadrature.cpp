#include "mlab/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <sstream>

namespace mlab {

QuadratureSpec resolve(const QuadratureSpec& spec, int m) {
  QuadratureSpec out = spec;
  if (out.interval_nodes <= 0) out.interval_nodes = m >= 3 ? 32 : 64;
  if (out.periodic_nodes <= 0) out.periodic_nodes = m >= 3 ? 64 : 128;
  return out;
}

std::vector<QuadratureSpec> refinement_levels(const QuadratureSpec& spec, int m) {
  const QuadratureSpec full = resolve(spec, m);
  std::vector<QuadratureSpec> levels;
  for (int div : {4, 2, 1})
    levels.push_back({std::max(2, full.interval_nodes / div), std::max(4, full.periodic_nodes / div)});
  return levels;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw ArgumentError("Gauss-Legendre rule needs at least one node");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)),
            &gsl_integration_glfixed_table_free);
  if (!table) throw SolverError("could not allocate Gauss-Legendre table");
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &x[static_cast<std::size_t>(i)],
                                  &w[static_cast<std::size_t>(i)], table.get());
}

QuadratureGrid make_grid(const Immersion& imm, const QuadratureSpec& spec) {
  const QuadratureSpec s = resolve(spec, imm.m());
  QuadratureGrid grid;
  grid.m = imm.m();
  std::vector<std::vector<double>> xs, ws;
  for (const auto& ax : imm.domain()) {
    std::vector<double> x, w;
    if (ax.periodic) {
      const int n = s.periodic_nodes;
      const double h = (ax.hi - ax.lo) / n;
      for (int i = 0; i < n; ++i) {
        x.push_back(ax.lo + h * i);
        w.push_back(h);
      }
    } else {
      gauss_legendre(s.interval_nodes, ax.lo, ax.hi, x, w);
    }
    grid.resolution.push_back(static_cast<int>(x.size()));
    xs.push_back(std::move(x));
    ws.push_back(std::move(w));
  }
  std::vector<std::size_t> idx(xs.size(), 0);
  while (true) {
    ParamPoint u(grid.m);
    double w = 1.0;
    for (int a = 0; a < grid.m; ++a) {
      u[a] = xs[static_cast<std::size_t>(a)][idx[static_cast<std::size_t>(a)]];
      w *= ws[static_cast<std::size_t>(a)][idx[static_cast<std::size_t>(a)]];
    }
    grid.nodes.push_back(u);
    grid.weights.push_back(w);
    std::size_t a = xs.size();
    while (a-- > 0) {
      if (++idx[a] < xs[a].size()) break;
      idx[a] = 0;
      if (a == 0) return grid;
    }
  }
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

std::vector<double> integrate(const Immersion& imm, const QuadratureGrid& grid,
                              int components, const Integrand& integrand,
                              const Execution& exec) {
  const std::size_t n = grid.nodes.size();
  const auto c = static_cast<std::size_t>(components);
  std::vector<double> values(n * c, 0.0);
  parallel_for(n, exec, [&](std::size_t begin, std::size_t end) {
    std::vector<double> buf(c);
    for (std::size_t i = begin; i < end; ++i) {
      const PointFrame fr = frame(imm, grid.nodes[i]);
      std::fill(buf.begin(), buf.end(), 0.0);
      integrand(fr, buf.data());
      const double w = grid.weights[i] * fr.sqrt_det_g;
      for (std::size_t k = 0; k < c; ++k) values[i * c + k] = w * buf[k];
    }
  });
  std::vector<CompensatedSum> acc(c);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < c; ++k) {
      const double v = values[i * c + k];
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite integrand value at node " << i << " (u = "
           << grid.nodes[i].transpose() << "), component " << k;
        throw PoisonedResult(os.str());
      }
      acc[k].add(v);
    }
  std::vector<double> out(c);
  for (std::size_t k = 0; k < c; ++k) out[k] = acc[k].value();
  return out;
}

double integrate_scalar(const Immersion& imm, const QuadratureGrid& grid,
                        const std::function<double(const PointFrame&)>& integrand,
                        const Execution& exec) {
  return integrate(imm, grid, 1, [&](const PointFrame& fr, double* out) { out[0] = integrand(fr); },
                   exec)[0];
}

AmbientVector surface_gradient(const PointFrame& fr, const SmallVector& coord_grad) {
  return fr.from_tangent(fr.orthonormal_gradient(coord_grad));
}

AmbientVector surface_gradient(const Immersion& imm, const ParamPoint& u,
                               const AmbientScalar& f) {
  const PointFrame fr = frame(imm, u);
  const Dual2 v = f(fr.jet.taylor());
  SmallVector dg(fr.m);
  for (int i = 0; i < fr.m; ++i) dg[i] = v.d(i);
  return surface_gradient(fr, dg);
}

ConvergenceTable refine(const std::function<double(const QuadratureSpec&)>& compute,
                        const std::vector<QuadratureSpec>& levels, int m, double tol) {
  if (levels.size() < 2) throw ArgumentError("refine needs at least two resolutions");
  ConvergenceTable t;
  for (const auto& level : levels) {
    const QuadratureSpec s = resolve(level, m);
    t.resolutions.push_back({s.interval_nodes, s.periodic_nodes});
    t.values.push_back(compute(s));
  }
  for (std::size_t i = 1; i < t.values.size(); ++i)
    t.differences.push_back(std::abs(t.values[i] - t.values[i - 1]));
  t.converged = t.differences.back() < tol;
  return t;
}

}  // namespace mlab
