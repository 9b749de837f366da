// SPDX-License-Identifier: Apache-2.0
#include "newsblend/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace newsblend {

namespace {

template <class A, class B>
void require_same_length(std::span<A> a, std::span<B> b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                ")");
  }
  if (a.empty()) throw std::invalid_argument(std::string(what) + ": empty input");
}

}  // namespace

double mse(std::span<const double> actual, std::span<const double> predicted) {
  require_same_length(actual, predicted, "mse");
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = actual[i] - predicted[i];
    sum += d * d;
  }
  return sum / static_cast<double>(actual.size());
}

double mpa(std::span<const double> actual, std::span<const double> predicted) {
  require_same_length(actual, predicted, "mpa");
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!(actual[i] > 0.0)) {
      throw std::invalid_argument("mpa: actual price at index " + std::to_string(i) +
                                  " must be > 0");
    }
    sum += std::abs(actual[i] - predicted[i]) / actual[i];
  }
  return 1.0 - sum / static_cast<double>(actual.size());
}

std::vector<int> directions(std::span<const double> prev_actuals, std::span<const double> values) {
  if (prev_actuals.size() != values.size()) {
    throw std::invalid_argument("directions: length mismatch");
  }
  std::vector<int> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] > prev_actuals[i] ? 1 : 0;
  return out;
}

ConfusionCounts confusion(std::span<const int> actual_dirs, std::span<const int> predicted_dirs) {
  if (actual_dirs.size() != predicted_dirs.size()) {
    throw std::invalid_argument("confusion: length mismatch");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < actual_dirs.size(); ++i) {
    const int a = actual_dirs[i];
    const int p = predicted_dirs[i];
    if ((a != 0 && a != 1) || (p != 0 && p != 1)) {
      throw std::invalid_argument("confusion: non-binary direction at index " + std::to_string(i));
    }
    if (p == 1) {
      ++(a == 1 ? c.tp : c.fp);
    } else {
      ++(a == 1 ? c.fn : c.tn);
    }
  }
  return c;
}

Ratio precision(const ConfusionCounts& c) noexcept {
  const std::size_t den = c.tp + c.fp;
  if (den == 0) return {0.0, true};
  return {static_cast<double>(c.tp) / static_cast<double>(den), false};
}

Ratio recall(const ConfusionCounts& c) noexcept {
  const std::size_t den = c.tp + c.fn;
  if (den == 0) return {0.0, true};
  return {static_cast<double>(c.tp) / static_cast<double>(den), false};
}

Ratio f1(const ConfusionCounts& c) noexcept {
  const double p = precision(c).value;
  const double r = recall(c).value;
  if (p + r == 0.0) return {0.0, true};
  return {2.0 * p * r / (p + r), false};
}

double mda(std::span<const int> actual_dirs, std::span<const int> predicted_dirs) {
  require_same_length(actual_dirs, predicted_dirs, "mda");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < actual_dirs.size(); ++i) hits += actual_dirs[i] == predicted_dirs[i];
  return static_cast<double>(hits) / static_cast<double>(actual_dirs.size());
}

EvalReport evaluate(std::span<const double> actual, std::span<const double> predicted,
                    std::span<const double> prev_actuals) {
  require_same_length(actual, predicted, "evaluate");
  require_same_length(actual, prev_actuals, "evaluate");
  EvalReport r;
  r.n = actual.size();
  r.mse = mse(actual, predicted);
  r.mpa = mpa(actual, predicted);
  const auto da = directions(prev_actuals, actual);
  const auto dp = directions(prev_actuals, predicted);
  r.confusion = confusion(da, dp);
  const auto p = precision(r.confusion);
  const auto rc = recall(r.confusion);
  const auto f = f1(r.confusion);
  r.precision = p.value;
  r.precision_degenerate = p.degenerate;
  r.recall = rc.value;
  r.recall_degenerate = rc.degenerate;
  r.f1 = f.value;
  r.f1_degenerate = f.degenerate;
  r.mda = mda(da, dp);
  return r;
}

std::string format_table(std::span<const NamedReport> reports) {
  struct Row {
    const char* label;
    double EvalReport::*field;
    bool percent;
  };
  static constexpr Row rows[] = {
      {"MSE", &EvalReport::mse, false},        {"MPA", &EvalReport::mpa, true},
      {"Precision", &EvalReport::precision, true}, {"Recall", &EvalReport::recall, true},
      {"F1-Score", &EvalReport::f1, true},     {"MDA", &EvalReport::mda, true},
  };

  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Metric"};
  for (const auto& [name, _] : reports) header.push_back(name);
  cells.push_back(header);
  for (const auto& row : rows) {
    std::vector<std::string> line{row.label};
    for (const auto& [_, rep] : reports) {
      char buf[48];
      const double v = rep.*(row.field);
      if (row.percent) std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
      else std::snprintf(buf, sizeof buf, "%.2f", v);
      line.emplace_back(buf);
    }
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t j = 0; j < line.size(); ++j) width[j] = std::max(width[j], line[j].size());
  }
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < cells[i].size(); ++j) {
      const auto& s = cells[i][j];
      if (j == 0) {
        out += s + std::string(width[j] - s.size(), ' ');
      } else {
        out += "  " + std::string(width[j] - s.size(), ' ') + s;
      }
    }
    out += '\n';
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t j = 0; j < width.size(); ++j) total += width[j] + (j ? 2 : 0);
      out += std::string(total, '-') + '\n';
    }
  }
  return out;
}

}  // namespace newsblend
