#include <benchmark/benchmark.h>

#include "fracdpg/assembly.hpp"
#include "fracdpg/experiments.hpp"
#include "fracdpg/fractional.hpp"
#include "fracdpg/solver.hpp"

using namespace fracdpg;

namespace {

// Mesh bisected `levels` times towards x = 0, like an adaptive Example 2 run.
Mesh graded(int levels) {
  Mesh mesh = uniform_mesh(2);
  for (int i = 0; i < levels; ++i) mesh = refine(mesh, MarkedSet{{0}, false});
  return mesh;
}

void BM_CouplingBlockSelf(benchmark::State& state) {
  const Mesh mesh = uniform_mesh(8);
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(frac_coupling_block(mesh, 3, 3, 0.4, p, p + 2));
}
BENCHMARK(BM_CouplingBlockSelf)->DenseRange(0, 4, 2);

void BM_CouplingBlockAdjacent(benchmark::State& state) {
  const Mesh mesh = uniform_mesh(8);
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(frac_coupling_block(mesh, 2, 3, 0.4, p, p + 2));
}
BENCHMARK(BM_CouplingBlockAdjacent)->DenseRange(0, 4, 2);

void BM_CouplingBlockSeparated(benchmark::State& state) {
  const Mesh mesh = uniform_mesh(64);
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(frac_coupling_block(mesh, 5, 60, 0.4, p, p + 2));
}
BENCHMARK(BM_CouplingBlockSeparated)->DenseRange(0, 4, 2);

void BM_AssembleTheta(benchmark::State& state) {
  const Mesh mesh = uniform_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_theta(mesh, 4, 4, 1.5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleTheta)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oN);

void BM_AssembleSystem(benchmark::State& state) {
  const Mesh mesh = uniform_mesh(static_cast<int>(state.range(0)));
  const Problem problem = example2(0.6, 1.2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(mesh, {1, 1, 3, 3}, problem.data));
}
BENCHMARK(BM_AssembleSystem)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

void BM_SolveUniform(benchmark::State& state) {
  const SystemMatrices sys = assemble_system(uniform_mesh(static_cast<int>(state.range(0))), {1, 1, 3, 3}, example2(0.6, 1.2).data);
  for (auto _ : state) benchmark::DoNotOptimize(solve(sys));
}
BENCHMARK(BM_SolveUniform)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

// Strong grading takes the QR path of the normal-equation solver.
void BM_SolveGraded(benchmark::State& state) {
  const SystemMatrices sys = assemble_system(graded(static_cast<int>(state.range(0))), {2, 2, 4, 4}, example2(0.6, 1.2).data);
  for (auto _ : state) benchmark::DoNotOptimize(solve(sys));
}
BENCHMARK(BM_SolveGraded)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
