#include <benchmark/benchmark.h>

#include <random>

#include "valvelab/ident.hpp"
#include "valvelab/plant.hpp"
#include "valvelab/signals.hpp"

using namespace valvelab;

namespace {

struct Data {
  std::vector<double> u, y;
};

Data dataset(std::size_t n) {
  signals::PrbsConfig c;
  c.offset = 0.0;
  c.amplitude = 10.0;
  Data d;
  d.u = signals::prbs_excitation(c, n);
  d.y = plant::linear_run({{-1.3, 0.45}, {0.2, -0.05}, 0, 0.05}, d.u);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (double& v : d.y) v += noise(rng);
  return d;
}

void BM_RlsStep(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  auto s = ident::AdaptationState::make(Eigen::VectorXd::Zero(n), 1000.0, ident::GainProfile::variable_forgetting);
  std::vector<double> phi(static_cast<std::size_t>(n), 0.5);
  for (auto _ : state) {
    auto step = ident::rls_step(s, phi, 1.0);
    benchmark::DoNotOptimize(step.eps_aposteriori);
  }
}
BENCHMARK(BM_RlsStep)->Arg(2)->Arg(4)->Arg(6);

void BM_RlsRun(benchmark::State& state) {
  const auto d = dataset(500);
  const auto regs = ident::build_regressors(d.u, d.y, 2, 2);
  const auto init = ident::AdaptationState::make(Eigen::VectorXd::Zero(4), 1e6);
  for (auto _ : state) benchmark::DoNotOptimize(ident::rls_run(regs, init).final.theta);
}
BENCHMARK(BM_RlsRun);

void BM_OrderScan(benchmark::State& state) {
  const auto d = dataset(1022);
  const std::vector<std::size_t> orders{1, 2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(ident::order_scan(d.u, d.y, orders, orders));
}
BENCHMARK(BM_OrderScan);

}  // namespace
