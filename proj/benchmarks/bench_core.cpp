#include <benchmark/benchmark.h>

#include "qbd/master_equation.hpp"
#include "qbd/sweep.hpp"
#include "qbd/trajectory.hpp"

namespace {

using namespace qbd;

PhysicalParams qnd() { return PhysicalParams{}; }

void BM_SteadyStateAnalytic(benchmark::State& state) {
  const auto params = qnd();
  const auto gen = build_generator(params, derive_rates(params), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(steady_state_analytic(gen));
}
BENCHMARK(BM_SteadyStateAnalytic)->Arg(30)->Arg(40)->Arg(120);

void BM_EvolveToSteadyState(benchmark::State& state) {
  const auto params = qnd();
  const auto rates = derive_rates(params);
  const auto gen = build_generator(params, rates, 30);
  const auto p0 = PhotonDistribution::fock(0, 30);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(p0, gen, 200.0 / rates.gamma));
}
BENCHMARK(BM_EvolveToSteadyState)->Unit(benchmark::kMillisecond);

// One observer update at the mean inter-arrival spacing.
void BM_FilterStep(benchmark::State& state) {
  const auto params = qnd();
  const auto rates = derive_rates(params);
  const auto bath = thermal_generator(rates);
  const PassageTable table(params.phase, kDefaultNMax);
  FilterState filter{PhotonDistribution::thermal(rates.nbar, kDefaultNMax), 0.0};
  for (auto _ : state) {
    auto next = filter_correct(filter_predict(filter, bath, 1.0 / params.atom_rate), Outcome::g,
                               table);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_FilterStep);

void BM_Sweep(benchmark::State& state) {
  PhaseSweepSpec spec;
  spec.steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sweep)->Arg(150)->Arg(600)->Arg(2400)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SimulateOneSecond(benchmark::State& state) {
  TrajectoryConfig config;
  config.duration = 1.0;
  config.record_stride = 1000;
  for (auto _ : state) {
    config.seed++;
    benchmark::DoNotOptimize(simulate(config));
  }
}
BENCHMARK(BM_SimulateOneSecond)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
