#include <benchmark/benchmark.h>

#include "skewvar/minnesota.hpp"
#include "skewvar/sampler.hpp"
#include "skewvar/simulate.hpp"

using namespace skewvar;

namespace {

// args: family, k, T
void BM_GibbsSweep(benchmark::State& st) {
  ModelSpec spec;
  spec.family = static_cast<Family>(st.range(0));
  spec.sv = true;
  spec.k = static_cast<int>(st.range(1));
  spec.p = 1;
  const SimulatedData sim = simulate_dataset(spec, example_parameters(spec), st.range(2), 1);
  Problem problem;
  problem.spec = spec;
  problem.prior = default_prior(spec, sim.data.values);
  problem.design = build_design(sim.data, 1);
  ChainState state = initial_state(problem, 2);
  for (int i = 0; i < 50; ++i) gibbs_sweep(state, problem);
  for (auto _ : st) gibbs_sweep(state, problem);
  st.SetLabel(std::string(family_name(spec.family)) + "-SV");
}

void sweep_args(benchmark::internal::Benchmark* b) {
  for (Family f : kAllFamilies) {
    b->Args({static_cast<long>(f), 2, 50});
    b->Args({static_cast<long>(f), 4, 300});
  }
}

}  // namespace

BENCHMARK(BM_GibbsSweep)->Apply(sweep_args)->Unit(benchmark::kMicrosecond);
