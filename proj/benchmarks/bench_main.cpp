#include <random>

#include <benchmark/benchmark.h>

#include "mlab/builtins.hpp"
#include "mlab/curvature.hpp"
#include "mlab/identities.hpp"
#include "mlab/mesh.hpp"
#include "mlab/spectral.hpp"
#include "mlab/weights.hpp"

namespace {

void BM_Packet(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  mlab::SmallMatrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) a(i, j) = a(j, i) = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(mlab::packet(a));
}
BENCHMARK(BM_Packet)->DenseRange(2, 5);

void BM_Frame(benchmark::State& state) {
  const auto imm = mlab::builtin("ellipsoid", {{"axes", {1.0, 1.4, 0.8}}});
  mlab::ParamPoint u(2);
  u << 0.3, 1.1;
  for (auto _ : state) benchmark::DoNotOptimize(mlab::frame(imm, u));
}
BENCHMARK(BM_Frame);

void BM_HmIdentity(benchmark::State& state) {
  const auto imm = mlab::builtin("torus_of_revolution");
  const auto field = mlab::default_field(imm.ambient());
  const auto f = mlab::WeightSpec::parse("r^2");
  mlab::IdentityOptions o;
  o.refine = false;
  o.quadrature.interval_nodes = static_cast<int>(state.range(0));
  o.quadrature.periodic_nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mlab::hm_identity(imm, field, f, 1, o));
}
BENCHMARK(BM_HmIdentity)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

void BM_Lambda1(benchmark::State& state) {
  const auto mesh = mlab::triangulate(mlab::builtin("round_sphere"), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mlab::lambda1(mesh, 0, {}));
}
BENCHMARK(BM_Lambda1)->Arg(2500)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Steklov(benchmark::State& state) {
  const auto disk = mlab::StarDomain::disk(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(mlab::steklov(disk, static_cast<int>(state.range(0)), false));
}
BENCHMARK(BM_Steklov)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
