// Serial reference against the OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <map>

#include "netcube/cube_tree.hpp"
#include "netcube/doubling.hpp"
#include "netcube/generators.hpp"
#include "netcube/measure.hpp"
#include "netcube/metric_space.hpp"
#include "netcube/rng.hpp"
#include "netcube/spectrum.hpp"

using namespace netcube;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

struct Fixture {
  FiniteMetricSpace space;
  NetHierarchy nets;
  CubeTree tree;
  MeasureAssignment measure;
};

const Fixture& cloud(std::size_t n) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto space = generate(GeneratorSpec::euclidean_random(n, 2, 17));
    auto nets = build_nets(space, 1.0 / 7.0);
    auto tree = build_tree(space, 1.0 / 7.0);
    const double p = std::min(0.05, 1.0 / static_cast<double>(child_counts(tree).max + 1));
    auto measure = build_doubling_measure(tree, p);
    it = cache.emplace(n, Fixture{std::move(space), std::move(nets), std::move(tree), std::move(measure)}).first;
  }
  return it->second;
}

void BM_extent_from_matrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  Rng rng(3);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = 1.0 + rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(FiniteMetricSpace::from_matrix(d, n, mode(state)));
}

void BM_assign_parents(benchmark::State& state) {
  const auto& f = cloud(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(assign_parents(f.space, f.nets, mode(state)));
}

void BM_verify_tree_properties(benchmark::State& state) {
  const auto& f = cloud(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_tree_properties(f.tree, f.space, mode(state)));
}

void BM_verify_doubling(benchmark::State& state) {
  const auto& f = cloud(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_doubling(f.space, f.tree, f.measure, 1000, 1, mode(state)));
}

void BM_verify_doubling_exhaustive(benchmark::State& state) {
  const auto& f = cloud(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_doubling_exhaustive(f.space, f.tree, f.measure, mode(state)));
}

}  // namespace

BENCHMARK(BM_extent_from_matrix)->ArgsProduct({{0, 1}, {1000, 3000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assign_parents)->ArgsProduct({{0, 1}, {2000, 8000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_verify_tree_properties)->ArgsProduct({{0, 1}, {2000, 8000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_verify_doubling)->ArgsProduct({{0, 1}, {2000, 8000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_verify_doubling_exhaustive)->ArgsProduct({{0, 1}, {200, 500}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
