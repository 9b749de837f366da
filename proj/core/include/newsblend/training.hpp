// SPDX-License-Identifier: Apache-2.0
/**
 * @file   training.hpp
 * @brief  Stacked recurrent sequence-to-one regressors trained by full-batch BPTT.
 *
 * A model is `layers` recurrent layers of `hidden` units followed by a dense
 * head (hidden -> 1, identity). The top layer's hidden state at the last time
 * step feeds the head. During training every recurrent layer's output
 * sequence is multiplied by an inverted-dropout mask that is drawn once per
 * sample per epoch and shared by all time steps.
 *
 * Loss is mean squared error over the batch; the gradient is clipped to a
 * global L2 norm of `clip_norm` before each optimizer step.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "newsblend/optimizer.hpp"
#include "newsblend/rnn_cells.hpp"
#include "newsblend/sample.hpp"

namespace newsblend {

enum class CellKind { lstm, gru };

std::string_view to_string(CellKind k) noexcept;
CellKind cell_kind_from_string(std::string_view name);

struct ModelConfig {
  CellKind cell = CellKind::lstm;
  std::size_t layers = 4;
  std::size_t hidden = 50;
  double dropout = 0.2;
  std::size_t epochs = 100;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::adam;
  double clip_norm = 5.0;  // <= 0 disables clipping
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Raised when the training loss stops being finite.
class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(std::size_t epoch, double loss);
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

using RecurrentLayer = std::variant<LstmParams, GruParams>;

struct SequenceModel {
  ModelConfig config;
  std::size_t input_size = 0;
  std::vector<RecurrentLayer> layers;
  DenseParams head;

  /// Visits every tensor as ("layer<k>.<tensor>" | "head.<tensor>", tensor).
  template <class F>
  void for_each_tensor(F&& f) {
    for (std::size_t k = 0; k < layers.size(); ++k) {
      const std::string prefix = "layer" + std::to_string(k) + ".";
      std::visit(
          [&](auto& p) {
            p.for_each_tensor([&](std::string_view name, auto& t) {
              f(std::string_view{prefix + std::string(name)}, t);
            });
          },
          layers[k]);
    }
    head.for_each_tensor(
        [&](std::string_view name, auto& t) { f(std::string_view{"head." + std::string(name)}, t); });
  }
  template <class F>
  void for_each_tensor(F&& f) const {
    const_cast<SequenceModel*>(this)->for_each_tensor(
        [&](std::string_view name, const auto& t) { f(name, t); });
  }

  std::size_t parameter_count() const;

  friend bool operator==(const SequenceModel&, const SequenceModel&) = default;
};

struct TrainTrace {
  std::vector<double> epoch_loss;  // training loss (dropout active) per epoch
  double wall_seconds = 0.0;
};

struct TrainResult {
  SequenceModel model;
  TrainTrace trace;
};

/// Initializes parameters deterministically from cfg.seed.
SequenceModel build_model(const ModelConfig& cfg, std::size_t feature_count);

TrainResult train(SequenceModel model, std::span<const WindowSample> samples);

/// Dropout disabled. One scaled prediction per sample, in input order.
Vector predict(const SequenceModel& model, std::span<const WindowSample> samples);
double predict_one(const SequenceModel& model, const Matrix& inputs);

/// Mean squared error of predict() against sample targets.
double mse_loss(const SequenceModel& model, std::span<const WindowSample> samples);

struct LossGradient {
  double loss = 0.0;
  SequenceModel gradient;  // same shapes as the model
};

/// Exact loss gradient with dropout disabled.
LossGradient loss_gradient(const SequenceModel& model, std::span<const WindowSample> samples);

}  // namespace newsblend
