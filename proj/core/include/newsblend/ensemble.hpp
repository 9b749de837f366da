// SPDX-License-Identifier: Apache-2.0
/**
 * @file   ensemble.hpp
 * @brief  Level-1 combiners over a p x m matrix of level-0 predictions.
 *
 * blend_fit trains a three-layer fully connected meta-learner
 * (m -> h1 relu -> h2 relu -> 1 identity) on held-out level-0 predictions.
 * The averaging and weighted-average combiners are the baselines it is
 * compared against.
 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "newsblend/date.hpp"
#include "newsblend/rnn_cells.hpp"

namespace newsblend {

/// Rows are predictions (one per target date), columns are sub-models.
struct Level0Predictions {
  Matrix values;                    // p x m
  std::vector<std::string> labels;  // m labels, may be empty
  std::vector<Date> dates;          // p dates, may be empty

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t models() const noexcept { return values.cols(); }
  /// p >= 1, m >= 2, finite values, label/date counts consistent.
  void validate() const;

  static Level0Predictions from_columns(const std::vector<Vector>& columns,
                                        std::vector<std::string> labels = {},
                                        std::vector<Date> dates = {});
};

struct MetaLearnerConfig {
  std::size_t hidden1 = 8;
  std::size_t hidden2 = 4;
  double learning_rate = 1e-2;
  std::size_t epochs = 500;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const MetaLearnerConfig&, const MetaLearnerConfig&) = default;
};

/**
 * Three dense layers plus an affine standardization of inputs and output.
 * blend_fit sets the standardization from the validation rows so the ReLU
 * units start out straddling the data, and shifts the output bias so the
 * initial predictions have the target mean; initialize() leaves the
 * standardization as identity.
 */
struct MetaLearner {
  MetaLearnerConfig config;
  std::array<DenseParams, 3> layers;
  Vector input_mean, input_scale;  // per column
  double output_mean = 0.0;
  double output_scale = 1.0;

  std::size_t input_size() const noexcept { return layers[0].in(); }
  double predict_row(std::span<const double> row) const;

  template <class F>
  void for_each_tensor(F&& f) {
    for (std::size_t k = 0; k < layers.size(); ++k) {
      const std::string prefix = "layer" + std::to_string(k) + ".";
      layers[k].for_each_tensor([&](std::string_view name, auto& t) {
        f(std::string_view{prefix + std::string(name)}, t);
      });
    }
  }
  template <class F>
  void for_each_tensor(F&& f) const {
    const_cast<MetaLearner*>(this)->for_each_tensor(
        [&](std::string_view name, const auto& t) { f(name, t); });
  }

  /// Untrained network with the configured widths, deterministic per seed.
  static MetaLearner initialize(const MetaLearnerConfig& cfg, std::size_t models);

  friend bool operator==(const MetaLearner&, const MetaLearner&) = default;
};

MetaLearner blend_fit(const Level0Predictions& level0_val, std::span<const double> val_targets,
                      const MetaLearnerConfig& cfg = {});
Vector blend_predict(const MetaLearner& meta, const Level0Predictions& level0_test);

Vector average_predict(const Level0Predictions& level0);

struct WeightVector {
  std::vector<double> weights;

  /// Non-negative and summing to 1 within 1e-9.
  void validate() const;
  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

/// Exhaustive search over the simplex grid with spacing `step` (1/step must be
/// an integer). Ties in validation MSE go to the point nearest equal weights.
WeightVector weighted_average_fit(const Level0Predictions& level0_val,
                                  std::span<const double> val_targets, double step = 0.01);
Vector weighted_average_predict(const WeightVector& w, const Level0Predictions& level0);

}  // namespace newsblend
