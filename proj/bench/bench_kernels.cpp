#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "qgeo/parallel.hpp"
#include "qgeo/protocols.hpp"

using namespace qgeo;

namespace {

RealVector scalar(double x) {
  RealVector v(1);
  v << x;
  return v;
}

ExecutionPolicy policy_for(const benchmark::State& state) {
  return state.range(0) == 0 ? kSerial : ExecutionPolicy{Execution::parallel, static_cast<int>(state.range(0))};
}

std::vector<double> tau_grid(int count, double lo, double hi) {
  std::vector<double> taus(count);
  for (int i = 0; i < count; ++i) taus[i] = lo + (hi - lo) * i / (count - 1);
  return taus;
}

// range(0): 0 runs the serial reference, n > 0 the OpenMP kernel with n workers.

void BM_LandauZenerSweep(benchmark::State& state) {
  const LandauZener lz(2.0);
  const Protocol protocol = linear_protocol(scalar(-10.0), scalar(10.0));
  const std::vector<double> taus = tau_grid(16, 5.0, 50.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_final_probability(lz, protocol, taus, 0, Tolerances{}, policy_for(state)));
  }
}

void BM_IsingTransition(benchmark::State& state) {
  const Protocol protocol = linear_protocol(scalar(2.0), scalar(0.0));
  PropagateOptions options;
  options.samples = 51;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ising_ground_transition(50, 1.0, protocol, 20.0, options, policy_for(state)));
  }
}

void BM_IsingSweep(benchmark::State& state) {
  const Protocol protocol = linear_protocol(scalar(2.0), scalar(0.0));
  const std::vector<double> taus = tau_grid(8, 5.0, 40.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ising_sweep_final_probability(20, 1.0, protocol, taus, Tolerances{}, policy_for(state)));
  }
}

void BM_IsingFirstOrder(benchmark::State& state) {
  const Protocol protocol = linear_protocol(scalar(2.0), scalar(0.0));
  const std::vector<double> times = tau_grid(41, 0.0, 30.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ising_first_order(50, 1.0, protocol, 30.0, times, policy_for(state)));
  }
}

void BM_IsingLengths(benchmark::State& state) {
  const std::vector<int> sites{10, 50, 100, 200, 500};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ising_lengths(sites, 1.0, 0.0, 2.0, policy_for(state)));
  }
}

void workers(benchmark::internal::Benchmark* b) {
  b->ArgName("workers")->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_LandauZenerSweep)->Apply(workers);
BENCHMARK(BM_IsingTransition)->Apply(workers);
BENCHMARK(BM_IsingSweep)->Apply(workers);
BENCHMARK(BM_IsingFirstOrder)->Apply(workers);
BENCHMARK(BM_IsingLengths)->Apply(workers);

BENCHMARK_MAIN();
