#include <benchmark/benchmark.h>

#include "valvelab/adapt.hpp"
#include "valvelab/plant.hpp"
#include "valvelab/presets.hpp"
#include "valvelab/signals.hpp"

using namespace valvelab;

namespace {

void BM_ValveRun(benchmark::State& state) {
  const auto params = plant::builtin_preset("valve3");
  signals::PrbsConfig c;
  const auto u = signals::prbs_generate(c, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(plant::valve_run(params, u, 0.05));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ValveRun)->Arg(1022)->Arg(8192);

void BM_IterativeAdaptation(benchmark::State& state) {
  const auto model = adapt::open_loop_fit(plant::builtin_preset("valve0"), {});
  adapt::IterateOptions o;
  o.iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    plant::ValveSimulator sim(plant::builtin_preset("valve6"), 0.05);
    benchmark::DoNotOptimize(adapt::iterate(sim, model, {}, o));
  }
}
BENCHMARK(BM_IterativeAdaptation)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
