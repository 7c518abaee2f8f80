#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mlab/immersion.hpp"
#include "mlab/parallel.hpp"

namespace mlab {

// Node counts per axis kind; zero means "default for the surface dimension".
struct QuadratureSpec {
  int interval_nodes = 0;
  int periodic_nodes = 0;
};

// 64/128 for curves and surfaces, 32/64 for three-dimensional parameter
// domains.
QuadratureSpec resolve(const QuadratureSpec& spec, int m);

// Coarse-to-fine levels ending at `spec`: quarter, half and full resolution.
std::vector<QuadratureSpec> refinement_levels(const QuadratureSpec& spec, int m);

struct QuadratureGrid {
  int m = 0;
  std::vector<ParamPoint> nodes;
  std::vector<double> weights;
  std::vector<int> resolution;  // per axis
};

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

// Tensor grid: Gauss-Legendre on interval axes, trapezoid on periodic axes.
QuadratureGrid make_grid(const Immersion& imm, const QuadratureSpec& spec);

// Compensated (Neumaier) accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Integrand: fills `out[0..components)` from the frame at one node.
using Integrand = std::function<void(const PointFrame&, double* out)>;

// sum_n w_n sqrt(det g)(u_n) F(u_n), componentwise. Nodes are evaluated in
// parallel; the reduction runs serially in node order so the result does not
// depend on the thread count. A non-finite integrand raises PoisonedResult
// naming the first offending node.
std::vector<double> integrate(const Immersion& imm, const QuadratureGrid& grid,
                              int components, const Integrand& integrand,
                              const Execution& exec = {});
double integrate_scalar(const Immersion& imm, const QuadratureGrid& grid,
                        const std::function<double(const PointFrame&)>& integrand,
                        const Execution& exec = {});

// Scalar functions of the ambient position, written once for Dual2.
using AmbientScalar = std::function<Dual2(const DualPoint&)>;

// Surface gradient of f o phi at u, in ambient coordinates.
AmbientVector surface_gradient(const Immersion& imm, const ParamPoint& u,
                               const AmbientScalar& f);
// Same from a frame and a coordinate gradient df/du^i.
AmbientVector surface_gradient(const PointFrame& fr, const SmallVector& coord_grad);

struct ConvergenceTable {
  std::vector<std::vector<int>> resolutions;
  std::vector<double> values;
  std::vector<double> differences;  // |v_{i+1} - v_i|
  bool converged = false;
};

ConvergenceTable refine(const std::function<double(const QuadratureSpec&)>& compute,
                        const std::vector<QuadratureSpec>& levels, int m, double tol);

}  // namespace mlab
