// SPDX-License-Identifier: Apache-2.0
//
// newsblend: run the backtest, score headlines, or re-evaluate predictions.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "newsblend/csv.hpp"
#include "newsblend/experiment.hpp"
#include "newsblend/sentiment.hpp"

namespace fs = std::filesystem;
using namespace newsblend;

namespace {

struct RunArgs {
  std::string config;
  std::string data;
  std::optional<std::uint64_t> seed;
  std::string models;
  std::string out;
  std::optional<std::size_t> window;
  std::string split_mode;
  bool quiet = false;
};

struct ScoreArgs {
  std::string headlines;
  std::string lexicon;
  std::string prices;
  std::string out;
};

struct EvalArgs {
  std::string predictions;
  bool json = false;
};

int cmd_run(const RunArgs& a) {
  ExperimentConfig cfg;
  try {
    if (!a.config.empty()) cfg = ExperimentConfig::from_file(a.config);
    if (!a.data.empty()) {
      cfg.data = a.data;
      cfg.headlines.clear();
      cfg.prices.clear();
      cfg.lexicon.clear();
    }
    if (a.seed) cfg.set_seed(*a.seed);
    if (!a.models.empty()) cfg.set_models(a.models);
    if (!a.out.empty()) cfg.out = a.out;
    if (a.window) cfg.window = *a.window;
    if (!a.split_mode.empty()) cfg.split_mode = window_assignment_from_string(a.split_mode);
  } catch (const std::exception& e) {
    throw StageError("config", e.what());
  }
  const RunReport report = run_experiment(cfg);
  if (!a.quiet) {
    std::cout << metrics_table(report);
    if (!cfg.out.empty()) std::cout << "outputs written to " << cfg.out.string() << "\n";
  }
  return 0;
}

int cmd_score(const ScoreArgs& a) {
  try {
    const Lexicon lex = parse_lexicon(a.lexicon);
    if (!lex.warnings.empty()) {
      std::cerr << "warning: " << lex.warnings.size()
                << " duplicate lexicon token(s); the last value of each is used\n";
    }
    const auto days = score_headlines_csv(a.headlines, lex);
    const std::string csv = compounds_csv(days, a.prices);
    if (a.out.empty() || a.out == "-") {
      std::cout << csv;
    } else {
      write_file_atomic(a.out, csv);
    }
  } catch (const std::exception& e) {
    throw StageError("score", e.what());
  }
  return 0;
}

int cmd_eval(const EvalArgs& a) {
  try {
    const auto file = parse_predictions_csv(read_text_file(a.predictions), a.predictions);
    const auto reports = evaluate_predictions(file);
    std::cout << (a.json ? eval_reports_json(reports) : format_table(reports));
  } catch (const std::exception& e) {
    throw StageError("eval", e.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"newsblend: news-sentiment stock forecasting with a blending ensemble"};
  app.set_version_flag("--version", std::string("newsblend ") + NEWSBLEND_VERSION);
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Train, combine and evaluate all selected models");
  run_cmd->add_option("--config", run.config, "Experiment JSON config")->check(CLI::ExistingFile);
  run_cmd->add_option("--data", run.data, "Six-column dataset CSV (overrides config data paths)")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "Base seed (lstm=seed, gru=seed+1, meta=seed+2)");
  run_cmd->add_option("--models", run.models,
                      "Comma list of lstm,gru,averaging,weighted_average,blending");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--window", run.window, "Rolling window length")->check(CLI::PositiveNumber);
  run_cmd->add_option("--split-mode", run.split_mode, "Window assignment")
      ->check(CLI::IsMember({"by_target_date", "within_split"}));
  run_cmd->add_flag("--quiet", run.quiet, "Do not print the metrics table");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score headlines into daily compound columns");
  score_cmd->add_option("--headlines", score.headlines, "CSV with date,source,title")
      ->required()
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--lexicon", score.lexicon, "Tab-separated valence lexicon")
      ->required()
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--prices", score.prices,
                        "CSV with date,adj_close; output gets one row per price date")
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--out", score.out, "Output CSV (default stdout)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Recompute metrics from a predictions CSV");
  eval_cmd->add_option("--predictions", eval.predictions, "predictions.csv from a run")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_flag("--json", eval.json, "Print JSON instead of a table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*score_cmd) return cmd_score(score);
    if (*eval_cmd) return cmd_eval(eval);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
