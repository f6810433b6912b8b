// Microbenchmarks for the hot paths: exact coupling accumulation, statevector
// evolution, residual tail sums, synthesis, and the closed-form fidelity.

#include <benchmark/benchmark.h>

#include "qdmol/geometry.hpp"
#include "qdmol/lattice.hpp"
#include "qdmol/schedule.hpp"
#include "qdmol/simulator.hpp"
#include "qdmol/synthesis.hpp"

namespace {

using namespace qdmol;

const MoleculeGeometry kGeom(1.0, 10.0);

void BM_NetCoupling(benchmark::State& state) {
  const Schedule sched = gen_m_step(Lattice::chain(static_cast<int>(state.range(0))), 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net_coupling(sched));
  }
}
BENCHMARK(BM_NetCoupling)->Arg(32)->Arg(128);

void BM_Evolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Schedule sched = gen_three_step(Lattice::chain(n));
  const CouplingMatrix coupling = net_coupling(sched);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(initial_state(n), coupling, kGeom));
  }
}
BENCHMARK(BM_Evolve)->Arg(10)->Arg(14)->Arg(16);

void BM_ResidualSum(benchmark::State& state) {
  const auto k_max = static_cast<std::int64_t>(state.range(0));
  const ResidualWeights weights = ResidualWeights::uniform();
  for (auto _ : state) {
    benchmark::DoNotOptimize(residual_sum(kGeom, weights, k_max, 1e-3));
  }
}
BENCHMARK(BM_ResidualSum)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_SolveWindow(benchmark::State& state) {
  const PatternFamily family = PatternFamily::shifted_window(8);
  TargetProfile target;
  target.cancel = {2, 3, 4, 5, 6};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_durations(family, target));
  }
}
BENCHMARK(BM_SolveWindow);

void BM_FidelityAnalytic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Schedule sched = gen_three_step(Lattice::chain(n));
  const PhaseMatrix residual = residual_phases(net_coupling(sched), kGeom);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fidelity_analytic(residual));
  }
}
BENCHMARK(BM_FidelityAnalytic)->Arg(12)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
