// SPDX-License-Identifier: Apache-2.0
/**
 * @file   metrics.hpp
 * @brief  Price-error and direction metrics for a forecast backtest.
 *
 * Errors are computed on unscaled prices. Direction is 1 when a value is
 * strictly above the previous day's actual close, otherwise 0; the up move
 * is the positive class.
 */
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "newsblend/numerics.hpp"

namespace newsblend {

double mse(std::span<const double> actual, std::span<const double> predicted);

/// 1 - mean(|y - yhat| / y). Actual prices must be > 0.
double mpa(std::span<const double> actual, std::span<const double> predicted);

std::vector<int> directions(std::span<const double> prev_actuals, std::span<const double> values);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(std::span<const int> actual_dirs, std::span<const int> predicted_dirs);

/// A ratio whose denominator may be zero; `degenerate` is set and value is 0 then.
struct Ratio {
  double value = 0.0;
  bool degenerate = false;
};

Ratio precision(const ConfusionCounts& c) noexcept;
Ratio recall(const ConfusionCounts& c) noexcept;
Ratio f1(const ConfusionCounts& c) noexcept;

double mda(std::span<const int> actual_dirs, std::span<const int> predicted_dirs);

struct EvalReport {
  double mse = 0.0;
  double mpa = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mda = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
  ConfusionCounts confusion;
  std::size_t n = 0;
};

EvalReport evaluate(std::span<const double> actual, std::span<const double> predicted,
                    std::span<const double> prev_actuals);

using NamedReport = std::pair<std::string, EvalReport>;

/// Rows MSE, MPA, Precision, Recall, F1-Score, MDA; one column per model.
std::string format_table(std::span<const NamedReport> reports);

}  // namespace newsblend
