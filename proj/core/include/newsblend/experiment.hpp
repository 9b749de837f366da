// SPDX-License-Identifier: Apache-2.0
/**
 * @file   experiment.hpp
 * @brief  End-to-end backtest: load, scale, window, train level-0 models,
 *         fit combiners on validation predictions, evaluate on the test split.
 *
 * Level-0 models are trained once on the training split and are not refit
 * before predicting the test split. Weighted average and blending are both
 * fit on the validation split. Every output byte is a function of the
 * configuration, the input files and the seeds.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "newsblend/dataset.hpp"
#include "newsblend/ensemble.hpp"
#include "newsblend/metrics.hpp"
#include "newsblend/sentiment.hpp"
#include "newsblend/training.hpp"

namespace newsblend {

inline constexpr std::array<std::string_view, 5> kModelNames = {
    "lstm", "gru", "averaging", "weighted_average", "blending"};

/// An error raised inside a pipeline stage; what() reads "<stage>: <cause>".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& cause);
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

enum class ScalerFit { train, full_series };

struct ExperimentConfig {
  // Either `data` (six-column CSV) or `headlines` + `prices` + `lexicon`.
  std::filesystem::path data;
  std::filesystem::path headlines;
  std::filesystem::path prices;
  std::filesystem::path lexicon;

  SplitSpec split = default_split();
  std::size_t window = kDefaultWindow;
  WindowAssignment split_mode = WindowAssignment::by_target_date;
  ScalerFit scaler_fit = ScalerFit::train;

  ModelConfig lstm{.cell = CellKind::lstm};
  ModelConfig gru{.cell = CellKind::gru};
  MetaLearnerConfig meta;
  double weight_step = 0.01;

  std::vector<std::string> models{kModelNames.begin(), kModelNames.end()};
  std::uint64_t seed = 0;
  std::filesystem::path out;  // empty: nothing is written
  bool emit_plots = true;

  /// Seeds per model: lstm = seed, gru = seed + 1, meta-learner = seed + 2.
  void set_seed(std::uint64_t s);
  void set_models(std::string_view comma_list);
  void validate() const;

  /// Relative paths are resolved against `base_dir`. Unknown keys are errors.
  static ExperimentConfig from_json(std::string_view text,
                                    const std::filesystem::path& base_dir = {});
  static ExperimentConfig from_file(const std::filesystem::path& path);
  std::string to_json() const;
};

struct ModelOutcome {
  std::string name;
  Vector predicted;  // unscaled test predictions
  EvalReport eval;
};

struct RunReport {
  std::string version;
  ExperimentConfig config;
  std::size_t records = 0;
  std::size_t dropped_rows = 0;
  std::size_t train_samples = 0;
  std::size_t validation_samples = 0;
  ScalerParams scaler;
  std::optional<double> lstm_final_loss;
  std::optional<double> gru_final_loss;
  std::optional<WeightVector> weights;

  std::vector<Date> dates;  // test target dates
  Vector actual;
  Vector prev_actual;
  std::vector<ModelOutcome> models;  // in config.models order

  const ModelOutcome* find(std::string_view name) const noexcept;
};

std::string report_to_json(const RunReport& report);
std::string predictions_csv(const RunReport& report);
std::string metrics_table(const RunReport& report);

/// Runs the pipeline; if cfg.out is set writes report.json, predictions.csv,
/// table.txt (and plot data). On failure, files written by this call are removed.
RunReport run_experiment(const ExperimentConfig& cfg);

/// plot_series.csv (`date,series,value`, actual + each model over the test
/// split) and plot_metrics.csv (`model,metric,value` for MSE, Precision,
/// Recall, F1, MDA). Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const RunReport& report,
                                                  const std::filesystem::path& dir);

/// Six-column dataset CSV from daily compounds; with `prices` (`date,adj_close`)
/// one row per price date, compounds left empty where no headline exists.
/// Without prices the adj_close column is empty.
std::string compounds_csv(const std::vector<DailySentiment>& days,
                          const std::filesystem::path& prices = {});

struct PredictionsFile {
  std::vector<Date> dates;
  Vector actual;
  Vector prev_actual;
  std::vector<std::string> models;
  std::vector<Vector> predicted;
};

PredictionsFile parse_predictions_csv(std::string_view text, const std::string& source = "<csv>");

/// Recomputes metrics for each model column of a predictions file.
std::vector<NamedReport> evaluate_predictions(const PredictionsFile& file);

std::string eval_reports_json(std::span<const NamedReport> reports);

}  // namespace newsblend
