// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Optional arguments restrict the run to the
// listed criterion numbers, e.g. `newsblend_acceptance 3 9`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "gradcheck.hpp"
#include "newsblend/csv.hpp"
#include "newsblend/dataset.hpp"
#include "newsblend/ensemble.hpp"
#include "newsblend/experiment.hpp"
#include "newsblend/metrics.hpp"
#include "newsblend/rnn_cells.hpp"
#include "newsblend/sentiment.hpp"
#include "newsblend/training.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace newsblend;

namespace {

const fs::path kFixtures = NEWSBLEND_FIXTURE_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() /
                   ("newsblend_acceptance_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// 1. Finite-difference gradient agreement.
Verdict gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20240601);
  double cell_worst = 0, stack_worst = 0;
  std::string where;
  auto track = [&](const gradcheck::Outcome& o, double& worst) {
    if (o.max_rel_error > worst) {
      worst = o.max_rel_error;
      where = o.config + " at " + o.worst;
    }
  };
  for (int k = 0; k < 100; ++k) {
    track(gradcheck::lstm_cell(rng), cell_worst);
    track(gradcheck::gru_cell(rng), cell_worst);
    track(gradcheck::dense_layer(rng), cell_worst);
  }
  const std::string cell_where = where;
  for (int k = 0; k < 10; ++k) {
    track(gradcheck::stacked_model(rng, CellKind::lstm), stack_worst);
    track(gradcheck::stacked_model(rng, CellKind::gru), stack_worst);
  }
  const double secs = seconds_since(t0);
  const bool pass = cell_worst < 1e-5 && stack_worst < 1e-4 && secs < 30.0;
  return {pass, "cells max rel err " + fmt("%.3g", cell_worst) + " (<1e-5, " + cell_where +
                    "); stacked max rel err " + fmt("%.3g", stack_worst) + " (<1e-4); " +
                    fmt("%.1f", secs) + " s (<30 s)"};
}

// 2. Closed-form zero-parameter forwards.
Verdict closed_forms() {
  double worst = 0;
  Rng rng(7);
  for (std::size_t hidden : {1, 3, 8}) {
    for (std::size_t input : {1, 5}) {
      const auto lstm = LstmParams::zeros(input, hidden);
      const Vector x(input, 0.0);
      const auto step = lstm_forward(lstm, x, CellState::zeros(hidden, true));
      for (double v : step.next.h) worst = std::max(worst, std::abs(v));
      for (double v : step.next.c) worst = std::max(worst, std::abs(v));

      const auto gru = GruParams::zeros(input, hidden);
      Vector prev(hidden);
      for (double& v : prev) v = rng.uniform(-1, 1);
      Vector xr(input);
      for (double& v : xr) v = rng.uniform(-1, 1);
      const auto g = gru_forward(gru, xr, CellState{prev, {}});
      for (std::size_t k = 0; k < hidden; ++k) {
        worst = std::max(worst, std::abs(g.next.h[k] - 0.5 * prev[k]));
      }
    }
  }
  return {worst <= 1e-12, "max deviation " + fmt("%.3g", worst) + " (<=1e-12)"};
}

// 3. Metrics against a brute-force recomputation.
Verdict metric_oracle() {
  Rng rng(99);
  std::size_t mismatches = 0;
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> actual(9), predicted(9), prev(9);
    for (int i = 0; i < 9; ++i) {
      prev[i] = rng.uniform(100.0, 200.0);
      actual[i] = prev[i] + rng.uniform(-10.0, 10.0);
      const double u = rng.uniform01();
      // Occasional exact ties exercise the not-up rule.
      predicted[i] = u < 0.1 ? prev[i] : (u < 0.15 ? actual[i] : actual[i] + rng.uniform(-12.0, 12.0));
    }
    const auto r = evaluate(actual, predicted, prev);
    const auto o = oracle::brute_force_metrics(actual, predicted, prev);
    if (r.confusion.tp != o.tp || r.confusion.fp != o.fp || r.confusion.fn != o.fn ||
        r.confusion.tn != o.tn || r.n != 9) {
      ++mismatches;
    }
    for (auto [a, b] : {std::pair{r.mse, o.mse}, {r.mpa, o.mpa}, {r.precision, o.precision},
                        {r.recall, o.recall}, {r.f1, o.f1}, {r.mda, o.mda}}) {
      worst = std::max(worst, std::abs(a - b));
    }
  }
  const ConfusionCounts worked{3, 2, 1, 3};
  const double p = precision(worked).value, rc = recall(worked).value, f = f1(worked).value;
  const bool worked_ok = std::abs(p - 0.60) < 1e-12 && std::abs(rc - 0.75) < 1e-12 &&
                         std::abs(100 * f - 66.67) < 0.005;
  const bool pass = mismatches == 0 && worst <= 1e-12 && worked_ok;
  return {pass, std::to_string(mismatches) + " count mismatches, max real diff " +
                    fmt("%.3g", worst) + "; worked case P/R/F1 = " + fmt("%.2f%%", 100 * p) +
                    " / " + fmt("%.2f%%", 100 * rc) + " / " + fmt("%.2f%%", 100 * f)};
}

// 4. Blending vs. sub-models on the synthetic backtest, 5 seeds.
Verdict synthetic_backtest() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> ratios;
  int mda_wins = 0;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto cfg = ExperimentConfig::from_file(kFixtures / "synthetic_backtest.json");
    cfg.set_seed(seed);
    const auto report = run_experiment(cfg);
    const double blend = report.find("blending")->eval.mse;
    const double best = std::min(report.find("lstm")->eval.mse, report.find("gru")->eval.mse);
    ratios.push_back(blend / best);
    const double mda_b = report.find("blending")->eval.mda;
    const double mda_base = std::max(report.find("averaging")->eval.mda,
                                     report.find("weighted_average")->eval.mda);
    if (mda_b >= mda_base) ++mda_wins;
    per_seed += (seed ? ", " : "") + fmt("%.3f", blend / best);
  }
  auto sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[2];
  const double secs = seconds_since(t0);
  const bool pass = median <= 1.10 && mda_wins >= 3 && secs < 300.0;
  return {pass, "median blend/best-sub MSE ratio " + fmt("%.3f", median) + " (<=1.10; seeds " +
                    per_seed + "); blending MDA >= baselines in " + std::to_string(mda_wins) +
                    "/5 seeds (>=3); " + fmt("%.1f", secs) + " s (<300 s)"};
}

// 5. Meta-learner sanity on stub level-0 columns.
Verdict meta_learner() {
  Rng rng(5);
  auto draw = [&](std::size_t n) {
    Vector v(n);
    for (double& x : v) x = rng.uniform01();
    return v;
  };
  const Vector fit_t = draw(50), test_t = draw(50);
  auto shifted = [](const Vector& t, double d) {
    Vector v = t;
    for (double& x : v) x += d;
    return v;
  };
  const auto meta = blend_fit(Level0Predictions::from_columns({shifted(fit_t, 1), shifted(fit_t, -1)}),
                              fit_t);
  const auto pred = blend_predict(meta, Level0Predictions::from_columns(
                                            {shifted(test_t, 1), shifted(test_t, -1)}));
  const double avg_mse = mse(test_t, pred);

  // One column reproduces the target; the other is a shifted stub or noise.
  double worst = 0.0;
  std::string cases;
  const std::pair<const char*, Vector> others[] = {
      {"target-1", shifted(fit_t, -1)}, {"target+1", shifted(fit_t, 1)}, {"noise", draw(50)}};
  for (const auto& [label, other] : others) {
    const auto l0 = Level0Predictions::from_columns({fit_t, other});
    const double m = mse(fit_t, blend_predict(blend_fit(l0, fit_t), l0));
    worst = std::max(worst, m);
    cases += std::string(cases.empty() ? "" : ", ") + label + " " + fmt("%.3g", m);
  }
  return {avg_mse < 0.05 && worst < 1e-4,
          "averaging stub test MSE " + fmt("%.3g", avg_mse) +
              " (<0.05); exact column beside " + cases + " validation MSE (all <1e-4)"};
}

// 6. Training capability on two learnable tasks.
Verdict training_capability() {
  const auto t0 = std::chrono::steady_clock::now();
  ModelConfig cfg;
  cfg.layers = 2;
  cfg.hidden = 16;
  cfg.dropout = 0.0;
  cfg.epochs = 200;
  cfg.learning_rate = 1e-2;
  cfg.seed = 3;

  Rng rng(11);
  std::vector<WindowSample> constant(64);
  for (auto& s : constant) {
    s.inputs = Matrix(10, 1);
    for (double& v : s.inputs.values()) v = rng.uniform01();
    s.target = 0.5;
  }
  const auto c = train(build_model(cfg, 1), constant);
  const double const_loss = c.trace.epoch_loss.back();

  std::vector<WindowSample> sine(64);
  auto wave = [](double t) { return 0.5 + 0.4 * std::sin(2.0 * M_PI * t / 16.0); };
  for (std::size_t i = 0; i < sine.size(); ++i) {
    sine[i].inputs = Matrix(10, 1);
    for (std::size_t t = 0; t < 10; ++t) sine[i].inputs(t, 0) = wave(double(i + t));
    sine[i].target = wave(double(i + 10));
  }
  const auto s = train(build_model(cfg, 1), sine);
  const double sine_mse = mse_loss(s.model, sine);
  const double secs = seconds_since(t0);
  return {const_loss < 1e-4 && sine_mse < 1e-3 && secs < 60.0,
          "constant-target final loss " + fmt("%.3g", const_loss) + " (<1e-4); sine scaled MSE " +
              fmt("%.3g", sine_mse) + " (<1e-3); 200 epochs each, 2x16 LSTM; " + fmt("%.1f", secs) +
              " s (<60 s)"};
}

// 7. Golden headline corpus.
Verdict sentiment_golden() {
  const Lexicon lex = parse_lexicon(kFixtures / "vader_lexicon.txt");
  std::ifstream in(kFixtures / "headlines_golden.tsv");
  std::string line;
  std::getline(in, line);
  std::size_t count = 0, bad = 0;
  double worst = 0;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    const std::string title = line.substr(0, tab);
    const double expected = std::stod(line.substr(tab + 1));
    const double got = compound_score(lex, title).compound;
    worst = std::max(worst, std::abs(got - expected));
    if (std::abs(got - expected) > 1e-4) ++bad;
    ++count;
  }
  const double empty = compound_score(lex, "").compound;
  const double unmatched = compound_score(lex, "Quarterly filings released on Tuesday").compound;
  const bool pass = count == 50 && bad == 0 && empty == 0.0 && unmatched == 0.0;
  return {pass, std::to_string(count - bad) + "/" + std::to_string(count) +
                    " headlines within 1e-4 (max diff " + fmt("%.3g", worst) + "); empty " +
                    fmt("%g", empty) + ", unmatched " + fmt("%g", unmatched)};
}

// 8. Byte-identical outputs from two identical runs.
Verdict determinism() {
  const fs::path a = scratch_dir("run_a"), b = scratch_dir("run_b");
  const fs::path config = kFixtures / "synthetic_backtest.json";
  std::string how;
#ifdef NEWSBLEND_CLI_PATH
  for (const auto& dir : {a, b}) {
    const std::string cmd = std::string("\"") + NEWSBLEND_CLI_PATH + "\" run --quiet --config \"" +
                            config.string() + "\" --seed 7 --out \"" + dir.string() + "\"";
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
  }
  how = "two `newsblend run` invocations";
#else
  for (const auto& dir : {a, b}) {
    auto cfg = ExperimentConfig::from_file(config);
    cfg.set_seed(7);
    cfg.out = dir;
    run_experiment(cfg);
  }
  how = "two run_experiment calls";
#endif
  bool same = true;
  for (const char* name : {"report.json", "predictions.csv"}) {
    same = same && fs::exists(a / name) &&
           read_text_file(a / name) == read_text_file(b / name);
  }
  fs::remove_all(a);
  fs::remove_all(b);
  return {same, how + (same ? ": report.json and predictions.csv byte-identical"
                            : ": outputs differ")};
}

// 9. Windowing arithmetic and null handling.
Verdict dataset_arithmetic() {
  std::ostringstream csv;
  csv << kDatasetHeader << "\n";
  auto day = std::chrono::sys_days{std::chrono::year{2018} / 4 / 2};
  std::vector<Date> dates;
  int written = 0;
  while (written < 21) {
    const std::chrono::weekday wd{day};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) {
      const bool null_row = written == 4 || written == 15;
      csv << format_date(Date{day}) << (null_row ? ",0.1,,0.2,0.3," : ",0.1,0.2,0.3,0.4,")
          << 100 + written << "\n";
      if (!null_row) dates.push_back(Date{day});
      ++written;
    }
    day += std::chrono::days{1};
  }
  const auto loaded = parse_dataset_csv(csv.str(), "<fixture>");
  const auto scaler = fit_scaler(loaded.records);
  const DateRange range{dates.front(), dates.back()};
  const auto samples = windows_within(loaded.records, range, scaler, 10, "test");
  const bool pass = loaded.records.size() == 19 && loaded.dropped_rows == 2 && samples.size() == 9;
  return {pass, std::to_string(loaded.records.size()) + "-day range, window 10 -> " +
                    std::to_string(samples.size()) + " samples (9); " +
                    std::to_string(loaded.dropped_rows) + " null rows dropped and counted (2)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"gradient correctness", gradients},
      {"closed-form forwards", closed_forms},
      {"metric oracle equivalence", metric_oracle},
      {"synthetic backtest: blending vs sub-models", synthetic_backtest},
      {"meta-learner sanity", meta_learner},
      {"training capability", training_capability},
      {"sentiment golden corpus", sentiment_golden},
      {"determinism", determinism},
      {"dataset arithmetic", dataset_arithmetic},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!only.empty() && !only.contains(id)) continue;
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, criteria[k].first,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
