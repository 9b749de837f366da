// SPDX-License-Identifier: Apache-2.0
#include "newsblend/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "newsblend/optimizer.hpp"

namespace newsblend {

namespace {

void require_targets(const Level0Predictions& l0, std::span<const double> targets) {
  if (targets.size() != l0.rows()) {
    throw ShapeError("level-0 matrix has " + std::to_string(l0.rows()) + " rows but " +
                     std::to_string(targets.size()) + " targets were given");
  }
}

void standardize(std::span<const double> column_values, double& mean, double& scale) {
  double sum = 0.0;
  for (double v : column_values) sum += v;
  mean = sum / static_cast<double>(column_values.size());
  double sq = 0.0;
  for (double v : column_values) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / static_cast<double>(column_values.size()));
  scale = sd > 1e-12 ? sd : 1.0;
}

}  // namespace

void Level0Predictions::validate() const {
  if (rows() < 1) throw std::invalid_argument("level-0 predictions: need at least one row");
  if (models() < 2) throw std::invalid_argument("level-0 predictions: need at least two models");
  if (!labels.empty() && labels.size() != models()) {
    throw ShapeError("level-0 predictions: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(models()) + " models");
  }
  if (!dates.empty() && dates.size() != rows()) {
    throw ShapeError("level-0 predictions: " + std::to_string(dates.size()) + " dates for " +
                     std::to_string(rows()) + " rows");
  }
  if (!all_finite(values.values())) {
    throw std::invalid_argument("level-0 predictions contain NaN or Inf");
  }
}

Level0Predictions Level0Predictions::from_columns(const std::vector<Vector>& columns,
                                                  std::vector<std::string> labels,
                                                  std::vector<Date> dates) {
  const std::size_t m = columns.size();
  const std::size_t p = m == 0 ? 0 : columns.front().size();
  Matrix values(p, m);
  for (std::size_t j = 0; j < m; ++j) {
    if (columns[j].size() != p) throw ShapeError("level-0 columns have different lengths");
    for (std::size_t i = 0; i < p; ++i) values(i, j) = columns[j][i];
  }
  return Level0Predictions{std::move(values), std::move(labels), std::move(dates)};
}

void MetaLearnerConfig::validate() const {
  if (hidden1 < 1 || hidden2 < 1) throw std::invalid_argument("meta-learner: hidden widths must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("meta-learner: learning_rate must be > 0");
  if (epochs < 1) throw std::invalid_argument("meta-learner: epochs must be >= 1");
}

MetaLearner MetaLearner::initialize(const MetaLearnerConfig& cfg, std::size_t models) {
  cfg.validate();
  Rng rng(cfg.seed);
  MetaLearner meta;
  meta.config = cfg;
  meta.layers[0] = DenseParams::random(rng, models, cfg.hidden1, Activation::relu);
  meta.layers[1] = DenseParams::random(rng, cfg.hidden1, cfg.hidden2, Activation::relu);
  meta.layers[2] = DenseParams::random(rng, cfg.hidden2, 1, Activation::identity);
  // Small positive ReLU biases start most hidden units in their active region.
  for (std::size_t k = 0; k < 2; ++k) {
    std::fill(meta.layers[k].bias.begin(), meta.layers[k].bias.end(), 0.1);
  }
  meta.input_mean.assign(models, 0.0);
  meta.input_scale.assign(models, 1.0);
  return meta;
}

double MetaLearner::predict_row(std::span<const double> row) const {
  if (row.size() != input_size()) {
    throw ShapeError("meta-learner expects " + std::to_string(input_size()) + " columns, got " +
                     std::to_string(row.size()));
  }
  Vector x(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) x[j] = (row[j] - input_mean[j]) / input_scale[j];
  for (const auto& layer : layers) x = dense_forward(layer, x).y;
  return x[0] * output_scale + output_mean;
}

MetaLearner blend_fit(const Level0Predictions& level0_val, std::span<const double> val_targets,
                      const MetaLearnerConfig& cfg) {
  level0_val.validate();
  require_targets(level0_val, val_targets);
  if (level0_val.rows() < 2) {
    throw std::invalid_argument("blend_fit: need at least 2 validation rows, got " +
                                std::to_string(level0_val.rows()));
  }
  const std::size_t p = level0_val.rows();
  const std::size_t m = level0_val.models();
  MetaLearner meta = MetaLearner::initialize(cfg, m);

  Vector column(p);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < p; ++i) column[i] = level0_val.values(i, j);
    standardize(column, meta.input_mean[j], meta.input_scale[j]);
  }
  standardize(val_targets, meta.output_mean, meta.output_scale);

  std::vector<Vector> inputs(p, Vector(m));
  Vector targets(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      inputs[i][j] = (level0_val.values(i, j) - meta.input_mean[j]) / meta.input_scale[j];
    }
    targets[i] = (val_targets[i] - meta.output_mean) / meta.output_scale;
  }

  // A constant target is fit exactly by the output mean; training would only
  // let Adam amplify rounding noise in the zero gradient.
  if (std::all_of(targets.begin(), targets.end(), [](double t) { return std::abs(t) < 1e-12; })) {
    auto& head = meta.layers[2];
    std::fill(head.weight.values().begin(), head.weight.values().end(), 0.0);
    std::fill(head.bias.begin(), head.bias.end(), 0.0);
    return meta;
  }

  // Start the output bias at the offset that centres the initial predictions.
  double mean_out = 0.0;
  for (const auto& x : inputs) {
    Vector y = x;
    for (const auto& layer : meta.layers) y = dense_forward(layer, y).y;
    mean_out += y[0];
  }
  meta.layers[2].bias[0] -= mean_out / static_cast<double>(p);

  MetaLearner grads = meta;
  for (auto& layer : grads.layers) layer = zeros_like(layer);
  auto param_views = parameter_spans(meta);
  auto grad_views = parameter_spans(grads);
  Optimizer opt(OptimizerKind::adam, cfg.learning_rate);
  const double n = static_cast<double>(p);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (auto& g : grad_views) std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < p; ++i) {
      auto s0 = dense_forward(meta.layers[0], inputs[i]);
      auto s1 = dense_forward(meta.layers[1], s0.y);
      auto s2 = dense_forward(meta.layers[2], s1.y);
      const Vector d_out{2.0 * (s2.y[0] - targets[i]) / n};
      auto d1 = dense_backward_accumulate(meta.layers[2], s2.cache, d_out, grads.layers[2]);
      auto d0 = dense_backward_accumulate(meta.layers[1], s1.cache, d1, grads.layers[1]);
      dense_backward_accumulate(meta.layers[0], s0.cache, d0, grads.layers[0]);
    }
    opt.step(param_views, grad_views);
  }
  return meta;
}

Vector blend_predict(const MetaLearner& meta, const Level0Predictions& level0_test) {
  if (level0_test.models() != meta.input_size()) {
    throw ShapeError("blend_predict: meta-learner expects " + std::to_string(meta.input_size()) +
                     " columns, got " + std::to_string(level0_test.models()));
  }
  Vector out;
  out.reserve(level0_test.rows());
  for (std::size_t i = 0; i < level0_test.rows(); ++i) {
    out.push_back(meta.predict_row(level0_test.values.row(i)));
  }
  return out;
}

Vector average_predict(const Level0Predictions& level0) {
  Vector out(level0.rows(), 0.0);
  const double m = static_cast<double>(level0.models());
  for (std::size_t i = 0; i < level0.rows(); ++i) {
    double sum = 0.0;
    for (double v : level0.values.row(i)) sum += v;
    out[i] = sum / m;
  }
  return out;
}

void WeightVector::validate() const {
  if (weights.empty()) throw std::invalid_argument("weight vector is empty");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("weights must sum to 1, got " + std::to_string(sum));
  }
}

Vector weighted_average_predict(const WeightVector& w, const Level0Predictions& level0) {
  if (w.weights.size() != level0.models()) {
    throw ShapeError("weighted_average_predict: " + std::to_string(w.weights.size()) +
                     " weights for " + std::to_string(level0.models()) + " models");
  }
  Vector out(level0.rows(), 0.0);
  for (std::size_t i = 0; i < level0.rows(); ++i) {
    const auto row = level0.values.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += w.weights[j] * row[j];
    out[i] = acc;
  }
  return out;
}

WeightVector weighted_average_fit(const Level0Predictions& level0_val,
                                  std::span<const double> val_targets, double step) {
  level0_val.validate();
  require_targets(level0_val, val_targets);
  const double ticks_real = 1.0 / step;
  const auto ticks = static_cast<std::size_t>(std::llround(ticks_real));
  if (!(step > 0.0) || ticks == 0 || std::abs(ticks_real - static_cast<double>(ticks)) > 1e-9) {
    throw std::invalid_argument("weighted_average_fit: 1/step must be a positive integer");
  }
  const std::size_t m = level0_val.models();
  const std::size_t p = level0_val.rows();
  const double uniform = 1.0 / static_cast<double>(m);

  std::vector<std::size_t> counts(m, 0);
  WeightVector best;
  double best_mse = std::numeric_limits<double>::infinity();
  double best_dist = std::numeric_limits<double>::infinity();
  Vector w(m);

  auto consider = [&] {
    for (std::size_t j = 0; j < m; ++j) {
      w[j] = static_cast<double>(counts[j]) / static_cast<double>(ticks);
    }
    double mse = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const auto row = level0_val.values.row(i);
      double pred = 0.0;
      for (std::size_t j = 0; j < m; ++j) pred += w[j] * row[j];
      const double e = pred - val_targets[i];
      mse += e * e;
    }
    mse /= static_cast<double>(p);
    double dist = 0.0;
    for (double wj : w) dist += (wj - uniform) * (wj - uniform);
    const bool first = !std::isfinite(best_mse);
    const double tol = first ? 0.0 : 1e-12 * best_mse;
    const bool better = first || mse < best_mse - tol;
    const bool tie = !better && std::abs(mse - best_mse) <= tol;
    if (better || (tie && dist < best_dist)) {
      best_mse = mse;
      best_dist = dist;
      best.weights = w;
    }
  };

  // Enumerate all compositions of `ticks` into m non-negative parts.
  auto recurse = [&](auto&& self, std::size_t j, std::size_t remaining) -> void {
    if (j + 1 == m) {
      counts[j] = remaining;
      consider();
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      counts[j] = c;
      self(self, j + 1, remaining - c);
    }
  };
  recurse(recurse, 0, ticks);
  return best;
}

}  // namespace newsblend
