#include <benchmark/benchmark.h>

#include "valvelab/plant.hpp"
#include "valvelab/signals.hpp"
#include "valvelab/spectral.hpp"

using namespace valvelab;

namespace {

std::vector<double> prbs(std::size_t n) {
  signals::PrbsConfig c;
  c.divider = 1;
  return signals::prbs_generate(c, n);
}

void BM_Dft(benchmark::State& state) {
  const auto x = prbs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral::dft(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dft)->RangeMultiplier(2)->Range(256, 2048)->Complexity(benchmark::oNSquared);

void BM_EtfeSmoothed(benchmark::State& state) {
  const auto u = prbs(1022);
  const auto y = plant::linear_run({{-0.9152}, {-0.0609}, 0, 0.05}, u);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::smooth(spectral::etfe(u, y, 0.05), 25));
}
BENCHMARK(BM_EtfeSmoothed);

}  // namespace
