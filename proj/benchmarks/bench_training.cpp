// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "newsblend/dataset.hpp"
#include "newsblend/ensemble.hpp"
#include "newsblend/training.hpp"

using namespace newsblend;

namespace {

std::vector<WindowSample> samples(std::size_t n) {
  Rng rng(7);
  std::vector<WindowSample> out(n);
  for (auto& s : out) {
    s.inputs = Matrix(kDefaultWindow, kFeatureCount);
    for (double& v : s.inputs.values()) v = rng.uniform(-1.0, 1.0);
    s.target = rng.uniform(0.0, 1.0);
  }
  return out;
}

// One epoch of full-batch training on 90 windows with the default architecture.
void BM_TrainEpoch(benchmark::State& state) {
  ModelConfig cfg;
  cfg.cell = state.range(0) == 0 ? CellKind::lstm : CellKind::gru;
  cfg.epochs = 1;
  const auto data = samples(90);
  const auto model = build_model(cfg, kFeatureCount);
  for (auto _ : state) benchmark::DoNotOptimize(train(model, data));
  state.SetLabel(std::string(to_string(cfg.cell)));
}
BENCHMARK(BM_TrainEpoch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BlendFit(benchmark::State& state) {
  Rng rng(8);
  Vector a(25), b(25), t(25);
  for (std::size_t i = 0; i < 25; ++i) {
    t[i] = rng.uniform(2600, 2800);
    a[i] = t[i] + rng.normal() * 10;
    b[i] = t[i] + rng.normal() * 15;
  }
  const auto l0 = Level0Predictions::from_columns({a, b});
  for (auto _ : state) benchmark::DoNotOptimize(blend_fit(l0, t));
}
BENCHMARK(BM_BlendFit)->Unit(benchmark::kMillisecond);

}  // namespace
