#include <benchmark/benchmark.h>

#include "skewvar/densities.hpp"
#include "skewvar/random.hpp"
#include "skewvar/scoring.hpp"

using namespace skewvar;

namespace {

void BM_GhSkewTLogpdf(benchmark::State& st) {
  const GhSkewTParams p{0.0, 1.0, static_cast<double>(st.range(0)) / 2.0, 6.0};
  double x = -5.0, acc = 0.0;
  for (auto _ : st) {
    acc += ghskewt_logpdf(x, p);
    x = x > 5.0 ? -5.0 : x + 0.01;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_GhSkewTLogpdf)->Arg(0)->Arg(2);

void BM_CrpsSample(benchmark::State& st) {
  Rng rng = make_rng(3);
  Eigen::VectorXd draws(st.range(0));
  for (auto& d : draws) d = std_normal(rng);
  for (auto _ : st) benchmark::DoNotOptimize(crps_sample(draws, 0.3));
}
BENCHMARK(BM_CrpsSample)->Arg(1000)->Arg(10000)->Arg(100000);

}  // namespace
