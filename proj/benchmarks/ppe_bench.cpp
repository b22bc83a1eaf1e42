#include <optional>
#include <vector>

#include <benchmark/benchmark.h>

#include "ppe/causal/fisher_z.hpp"
#include "ppe/changepoint.hpp"
#include "ppe/confseq.hpp"
#include "ppe/evalue.hpp"
#include "ppe/rng.hpp"

namespace {

void BM_PpiComponent(benchmark::State& state) {
  ppe::CounterRng rng(1, "bench");
  const ppe::ComponentBounds bounds{0.5, 1.5};
  double acc = 0.0;
  for (auto _ : state) {
    const double e_mu = 0.5 + rng.uniform();
    const double e_y = 0.5 + rng.uniform();
    acc += ppe::ppi_component(e_mu, e_y, true, 0.8, bounds);
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_PpiComponent);

ppe::LandscapeStep draw_step(ppe::CounterRng& rng, double pi) {
  const double y = rng.uniform() < 0.3 ? 1.0 : 0.0;
  const bool xi = rng.uniform() < pi;
  return {0.3, xi ? std::optional<double>(y) : std::nullopt, xi, pi};
}

void BM_LandscapeUpdate(benchmark::State& state) {
  const auto grid = ppe::ThetaGrid::uniform(0.001, 0.999, static_cast<std::size_t>(state.range(0)), 0.01);
  ppe::PLandscape land(grid.size(), ppe::LandscapeArm::prediction_powered);
  ppe::CounterRng rng(2, "bench");
  for (auto _ : state) land.update(grid, draw_step(rng, grid.policy_floor()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LandscapeUpdate)->Arg(32)->Arg(512);

void BM_ChangePointStep(benchmark::State& state) {
  const auto grid = ppe::ThetaGrid::uniform(0.005, 0.995, 32, 0.005);
  ppe::ChangePointConfig cfg;
  cfg.max_active = static_cast<std::size_t>(state.range(0));
  ppe::ChangePointState cp;
  ppe::CounterRng rng(3, "bench");
  for (auto _ : state) cp = ppe::cp_step(std::move(cp), grid, draw_step(rng, grid.policy_floor()), cfg);
}
BENCHMARK(BM_ChangePointStep)->Arg(6)->Arg(20);

void BM_FisherZ(benchmark::State& state) {
  ppe::CounterRng rng(4, "bench");
  Eigen::MatrixXd data(100, 6);
  for (long r = 0; r < data.rows(); ++r) {
    for (long c = 0; c < data.cols(); ++c) data(r, c) = rng.normal();
  }
  std::vector<int> cond;
  for (int k = 0; k < state.range(0); ++k) cond.push_back(2 + k);
  for (auto _ : state) benchmark::DoNotOptimize(ppe::causal::fisher_z_pvalue(data, 0, 1, cond));
}
BENCHMARK(BM_FisherZ)->DenseRange(0, 3);

} // namespace

BENCHMARK_MAIN();
