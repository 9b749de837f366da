// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "newsblend/rnn_cells.hpp"

using namespace newsblend;

namespace {

Vector random_vector(Rng& rng, std::size_t n) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

void BM_LstmForward(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto p = LstmParams::random(rng, hidden, hidden);
  const auto x = random_vector(rng, hidden);
  const CellState prev{random_vector(rng, hidden), random_vector(rng, hidden)};
  for (auto _ : state) benchmark::DoNotOptimize(lstm_forward(p, x, prev));
}
BENCHMARK(BM_LstmForward)->Arg(5)->Arg(50);

void BM_LstmBackward(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const auto p = LstmParams::random(rng, hidden, hidden);
  const auto step = lstm_forward(p, random_vector(rng, hidden),
                                 CellState{random_vector(rng, hidden), random_vector(rng, hidden)});
  const CellState grad{random_vector(rng, hidden), random_vector(rng, hidden)};
  auto acc = zeros_like(p);
  for (auto _ : state) benchmark::DoNotOptimize(lstm_backward_accumulate(p, step.cache, grad, acc));
}
BENCHMARK(BM_LstmBackward)->Arg(5)->Arg(50);

void BM_GruForward(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const auto p = GruParams::random(rng, hidden, hidden);
  const auto x = random_vector(rng, hidden);
  const CellState prev{random_vector(rng, hidden), {}};
  for (auto _ : state) benchmark::DoNotOptimize(gru_forward(p, x, prev));
}
BENCHMARK(BM_GruForward)->Arg(5)->Arg(50);

void BM_GruBackward(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  const auto p = GruParams::random(rng, hidden, hidden);
  const auto step = gru_forward(p, random_vector(rng, hidden), CellState{random_vector(rng, hidden), {}});
  const CellState grad{random_vector(rng, hidden), {}};
  auto acc = zeros_like(p);
  for (auto _ : state) benchmark::DoNotOptimize(gru_backward_accumulate(p, step.cache, grad, acc));
}
BENCHMARK(BM_GruBackward)->Arg(5)->Arg(50);

}  // namespace
