#include <benchmark/benchmark.h>

#include "valvelab/control.hpp"

using namespace valvelab;
using namespace valvelab::control;

namespace {

const DiscretePlantModel kPlant{{-0.9152}, {-0.0609}, 0, 0.05};

void BM_BezoutDesign(benchmark::State& state) {
  const auto P = dominant_poles({});
  DiscretePlantModel m = kPlant;
  m.delay = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bezout_design(m, P, DelayPolynomial::one(), DelayPolynomial::integrator(), DelayPolynomial::nyquist_opening()));
}
BENCHMARK(BM_BezoutDesign)->Arg(0)->Arg(2)->Arg(5);

void BM_Sensitivity(benchmark::State& state) {
  const auto c =
      bezout_design(kPlant, dominant_poles({}), DelayPolynomial::one(), DelayPolynomial::integrator(),
                    DelayPolynomial::nyquist_opening());
  for (auto _ : state) benchmark::DoNotOptimize(sensitivity(kPlant, c, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Sensitivity)->Arg(512)->Arg(4096);

void BM_ControllerStep(benchmark::State& state) {
  const auto c = pi_design(-0.9152, -0.0609, dominant_poles({}), 0.05);
  ControllerRunner runner(c);
  double y = 40.0;
  for (auto _ : state) {
    const auto out = runner.step(y, 40.0);
    y = 0.9152 * y - 0.0609 * out.u + 3.4;
    benchmark::DoNotOptimize(y);
  }
}
BENCHMARK(BM_ControllerStep);

}  // namespace
