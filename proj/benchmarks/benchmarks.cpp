#include <benchmark/benchmark.h>

#include <cstdint>
#include <map>
#include <vector>

#include "kolmo/brownian.hpp"
#include "kolmo/continuity.hpp"
#include "kolmo/kernel.hpp"
#include "kolmo/measure.hpp"
#include "kolmo/rng.hpp"
#include "kolmo/shs.hpp"

namespace {

using namespace kolmo;

void BM_GaussianDraw(benchmark::State& state) {
  const RngStream stream(42);
  std::uint64_t counter = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stream.gaussian(counter++));
  }
}
BENCHMARK(BM_GaussianDraw);

void BM_BrownianSample(benchmark::State& state) {
  const BrownianSampler sampler(1.0);
  const int level = static_cast<int>(state.range(0));
  std::uint64_t path = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.sample(level, RngStream(path_id_for(1, path++))));
  }
  state.SetItemsProcessed(state.iterations() << level);
}
BENCHMARK(BM_BrownianSample)->Arg(8)->Arg(10)->Arg(12);

void BM_RefineBridge(benchmark::State& state) {
  const BrownianSampler sampler(1.0);
  const int level = static_cast<int>(state.range(0));
  const RngStream stream(7);
  const SamplePath coarse = sampler.sample(level, stream);
  for (auto _ : state) {
    benchmark::DoNotOptimize(refine_bridge(coarse, stream));
  }
}
BENCHMARK(BM_RefineBridge)->Arg(8)->Arg(10)->Arg(12);

void BM_HolderScan(benchmark::State& state) {
  const BrownianSampler sampler(1.0);
  const int level = static_cast<int>(state.range(0));
  const SamplePath path = sampler.sample(level, RngStream(3));
  const std::vector<double> gammas{0.4, 0.6};
  for (auto _ : state) {
    benchmark::DoNotOptimize(holder_constants(path, gammas));
  }
}
BENCHMARK(BM_HolderScan)->Arg(8)->Arg(10)->Arg(11);

void BM_ProductFinite(benchmark::State& state) {
  const int steps = static_cast<int>(state.range(0));
  std::map<State, MeasureQ> rows;
  for (State w = -2; w <= 2; ++w) {
    std::vector<MeasureQ::Atom> atoms;
    for (State v = -2; v <= 2; ++v) atoms.emplace_back(v, Rat(1, 5));
    rows.emplace(w, MeasureQ::accumulate(atoms));
  }
  const DiscreteKernel kernel = DiscreteKernel::from_table(std::move(rows));
  const std::vector<DiscreteKernel> kernels(static_cast<std::size_t>(steps), kernel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(product_finite(kernels, 0));
  }
}
BENCHMARK(BM_ProductFinite)->Arg(3)->Arg(5)->Arg(7);

void BM_ComposeRandomWalk(benchmark::State& state) {
  const DiscreteKernel walk = random_walk_kernel(Rat(1, 3));
  for (auto _ : state) {
    DiscreteKernel acc = walk;
    for (int i = 1; i < state.range(0); ++i) acc = compose(acc, walk);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_ComposeRandomWalk)->Arg(8)->Arg(16);

void BM_KsTwoSample(benchmark::State& state) {
  const BrownianSampler sampler(1.0);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> a = marginal_samples(sampler, 1.0, 6, n, 1);
  const std::vector<double> b = marginal_samples(sampler, 1.0, 6, n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks_two_sample(a, b));
  }
}
BENCHMARK(BM_KsTwoSample)->Arg(1000)->Arg(10000);

void BM_SimulateThermostat(benchmark::State& state) {
  const HybridAutomaton automaton = thermostat();
  const int level = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(automaton, 10.0, level, RngStream(seed++)));
  }
}
BENCHMARK(BM_SimulateThermostat)->Arg(8)->Arg(10)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
