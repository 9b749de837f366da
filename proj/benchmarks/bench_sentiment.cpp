// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "newsblend/sentiment.hpp"

using namespace newsblend;

namespace {

const Lexicon& lexicon() {
  static const Lexicon lex = parse_lexicon(std::string(NEWSBLEND_FIXTURE_DIR) + "/vader_lexicon.txt");
  return lex;
}

void BM_CompoundScore(benchmark::State& state) {
  const auto& lex = lexicon();
  const std::string title = "Stocks are not very happy after the Fed hints at slightly faster hikes";
  for (auto _ : state) benchmark::DoNotOptimize(compound_score(lex, title));
}
BENCHMARK(BM_CompoundScore);

void BM_ParseLexicon(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_lexicon(std::string(NEWSBLEND_FIXTURE_DIR) + "/vader_lexicon.txt"));
  }
}
BENCHMARK(BM_ParseLexicon)->Unit(benchmark::kMillisecond);

}  // namespace
