#include <benchmark/benchmark.h>

#include "quadperiod/periods.hpp"
#include "quadperiod/refine.hpp"

namespace qp = quadperiod;

namespace {

qp::QuadGraph l_shape(int level) {
  return qp::build_quad_graph(qp::make_l_shape_surface(), 0.5 / (1 << level));
}

void BM_BuildQuadGraph(benchmark::State& state) {
  const auto surface = qp::make_l_shape_surface();
  const double cell = 0.5 / (1 << state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qp::build_quad_graph(surface, cell));
}
BENCHMARK(BM_BuildQuadGraph)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Homology(benchmark::State& state) {
  const auto g = l_shape(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qp::compute_homology(g));
  state.counters["quads"] = static_cast<double>(g.quad_count());
}
BENCHMARK(BM_Homology)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const auto g = l_shape(static_cast<int>(state.range(0)));
  const auto basis = qp::compute_homology(g);
  for (auto _ : state) benchmark::DoNotOptimize(qp::assemble(g, basis));
  state.counters["quads"] = static_cast<double>(g.quad_count());
}
BENCHMARK(BM_Assemble)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_CanonicalBasis(benchmark::State& state) {
  const auto g = l_shape(static_cast<int>(state.range(0)));
  const auto basis = qp::compute_homology(g);
  qp::SolverOptions o;
  o.kind = state.range(1) ? qp::SolverKind::kConjugateGradient : qp::SolverKind::kDirect;
  for (auto _ : state) benchmark::DoNotOptimize(qp::canonical_basis(g, basis, o));
  state.counters["quads"] = static_cast<double>(g.quad_count());
}
BENCHMARK(BM_CanonicalBasis)
    ->ArgsProduct({{2, 3, 4, 5}, {0, 1}})
    ->ArgNames({"level", "cg"})
    ->Unit(benchmark::kMillisecond);

void BM_Subdivide(benchmark::State& state) {
  const auto g = l_shape(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qp::subdivide(g));
}
BENCHMARK(BM_Subdivide)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
