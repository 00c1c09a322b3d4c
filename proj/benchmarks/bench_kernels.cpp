// Microbenchmarks for the message-passing and sampling kernels.
#include <benchmark/benchmark.h>

#include "ising/bp.hpp"
#include "ising/cavity.hpp"
#include "ising/exact.hpp"
#include "ising/generators.hpp"
#include "ising/montecarlo.hpp"
#include "ising/tree.hpp"

using namespace ising;

namespace {

void BM_Xi(benchmark::State& state) {
  double h = 0.37;
  for (auto _ : state) {
    h = 0.3 + xi(0.9, ExtField(h));
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_Xi);

void BM_BpSweep(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Graph g = gen_random_regular(n, 3, 7);
  IsingParams p(0.9, 0.2);
  MessageSet m = init_messages(g, BPInit::Free);
  for (auto _ : state) {
    m = bp_sweep(g, p, m).first;
    benchmark::DoNotOptimize(m.h.data());
  }
  state.SetItemsProcessed(state.iterations() * 2 * g.num_edges());
}
BENCHMARK(BM_BpSweep)->Range(1 << 10, 1 << 16);

void BM_PopulationStep(benchmark::State& state) {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  IsingParams p(0.8, 0.3);
  Population pop = population_init(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    pop = population_step(pop, pois, p, 5);
    benchmark::DoNotOptimize(pop.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PopulationStep)->Range(1 << 12, 1 << 17);

void BM_GlauberSweep(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Graph g = gen_random_regular(n, 3, 9);
  IsingParams p(0.6, 0.2);
  SpinState s = SpinState::uniform(g, 1);
  CounterRng rng(3, streams::kGlauber);
  for (auto _ : state) {
    glauber_sweep(g, p, s, rng);
    benchmark::DoNotOptimize(s.spins.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GlauberSweep)->Range(1 << 10, 1 << 16);

void BM_Enumerate(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Graph g = gen_random_regular(n, 3, 5);
  IsingParams p(0.7, 0.2);
  for (auto _ : state) {
    ExactSolution s = enumerate_exact(g, p);
    benchmark::DoNotOptimize(s.log_partition);
  }
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << n));
}
BENCHMARK(BM_Enumerate)->Arg(12)->Arg(16)->Arg(20);

void BM_TreeSolve(benchmark::State& state) {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  RootedTree t = sample_tree(pois, static_cast<int>(state.range(0)), 11);
  IsingParams p(0.8, 0.3);
  for (auto _ : state) {
    double m = root_magnetization(t, p, BoundaryCondition::Free);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * t.size());
}
BENCHMARK(BM_TreeSolve)->Arg(8)->Arg(10)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
