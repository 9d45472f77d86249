#include <memory>

#include <benchmark/benchmark.h>

#include "glround/cgep.hpp"
#include "glround/dynamics.hpp"
#include "glround/word_solver.hpp"

using namespace glround;

namespace {

std::shared_ptr<const GeneratorSet> example(const char* name) {
  return std::make_shared<const GeneratorSet>(load_generator_set(name));
}

void BM_NormReduceSolve(benchmark::State& state) {
  const auto set = example("example1");
  const auto inst = make_instance(set, ExactVector{1, 0, 0}, static_cast<std::size_t>(state.range(0)), 42);
  for (auto _ : state) benchmark::DoNotOptimize(norm_reduce_solve(inst));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NormReduceSolve)->Arg(10)->Arg(50)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MakeInstance(benchmark::State& state) {
  const auto set = example("example1");
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(make_instance(set, ExactVector{1, 0, 0}, static_cast<std::size_t>(state.range(0)), seed++));
}
BENCHMARK(BM_MakeInstance)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MeshEstimateS(benchmark::State& state) {
  const auto set = example("example1");
  for (auto _ : state)
    benchmark::DoNotOptimize(mesh_estimate_S(*set, 2, 0.4, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_MeshEstimateS)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Lyapunov(benchmark::State& state) {
  const auto set = example("example1");
  for (auto _ : state) benchmark::DoNotOptimize(estimate_lyapunov(*set, 200, 100, 1));
}
BENCHMARK(BM_Lyapunov)->Unit(benchmark::kMillisecond);

void BM_CgepBruteForce(benchmark::State& state) {
  const auto g = random_graph(static_cast<std::size_t>(state.range(0)), 1, 20, 7);
  const auto inst = build_instance(g, choose_params(g, Variant::exact_rational));
  for (auto _ : state) benchmark::DoNotOptimize(cgep_brute_force(inst));
}
BENCHMARK(BM_CgepBruteForce)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
