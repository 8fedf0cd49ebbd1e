#include <benchmark/benchmark.h>

#include "skewvar/integrated_likelihood.hpp"
#include "skewvar/simulate.hpp"

using namespace skewvar;

namespace {

// integrated likelihood at the truth, args: family, route (0 = A1, 1 = A2)
void BM_IntegratedLikelihood(benchmark::State& st) {
  ModelSpec spec;
  spec.family = static_cast<Family>(st.range(0));
  spec.sv = true;
  spec.k = 2;
  spec.p = 1;
  const ParameterDraw theta = example_parameters(spec);
  const SimulatedData sim = simulate_dataset(spec, theta, 100, 4);
  const Design d = build_design(sim.data, 1);
  const Eigen::MatrixXd h_mean = sim.latents.logh.array().exp();
  Rng rng = make_rng(5);
  for (auto _ : st) {
    const IntegratedLikelihood il =
        st.range(1) == 0 ? integrated_likelihood_A1(spec, theta, d, sim.latents.xi, rng)
                         : integrated_likelihood_A2(spec, theta, d, h_mean, rng);
    benchmark::DoNotOptimize(il.log_value);
  }
  st.SetLabel(std::string(family_name(spec.family)) + (st.range(1) == 0 ? " A1" : " A2"));
}
BENCHMARK(BM_IntegratedLikelihood)
    ->Args({static_cast<long>(Family::Gaussian), 0})
    ->Args({static_cast<long>(Family::StudentT), 0})
    ->Args({static_cast<long>(Family::MST), 0})
    ->Args({static_cast<long>(Family::OST), 0})
    ->Args({static_cast<long>(Family::OST), 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace
