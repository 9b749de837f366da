// SPDX-License-Identifier: Apache-2.0
/**
 * @file   dataset.hpp
 * @brief  Daily news-compound + price CSV ingestion, min-max scaling, and
 *         rolling-window sample construction.
 *
 * Input schema (header required):
 *
 *     date,wsj,reuters,cnbc,fortune,adj_close
 *
 * Dates are YYYY-MM-DD or MM/DD/YYYY (one format per file). An empty field is
 * a missing value; rows with any missing value are dropped and counted.
 */
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newsblend/date.hpp"
#include "newsblend/sample.hpp"

namespace newsblend {

inline constexpr std::array<std::string_view, 4> kNewsSources = {"wsj", "reuters", "cnbc",
                                                                 "fortune"};
inline constexpr std::string_view kDatasetHeader = "date,wsj,reuters,cnbc,fortune,adj_close";
inline constexpr std::size_t kFeatureCount = 5;  // four compounds + scaled close
inline constexpr std::size_t kDefaultWindow = 10;

struct TimeAlignedRecord {
  Date date{};
  std::array<double, 4> compounds{};  // kNewsSources order, each in [-1, 1]
  double adj_close = 0.0;
};

struct LoadedDataset {
  std::vector<TimeAlignedRecord> records;  // sorted by date
  std::size_t dropped_rows = 0;
  std::vector<std::size_t> dropped_lines;
};

LoadedDataset load_csv(const std::filesystem::path& path);
LoadedDataset parse_dataset_csv(std::string_view text, const std::string& source = "<csv>");

/// scale(x) = (x - min) / (max - min). Values outside [min, max] map outside [0, 1].
struct ScalerParams {
  double min = 0.0;
  double max = 1.0;

  double scale(double price) const noexcept { return (price - min) / (max - min); }
  double unscale(double scaled) const noexcept { return min + scaled * (max - min); }
};

/// Fits on adj_close. Throws when fewer than two distinct prices are present.
ScalerParams fit_scaler(std::span<const TimeAlignedRecord> records);
ScalerParams fit_scaler(std::span<const double> prices);

struct SplitSpec {
  DateRange train;
  DateRange validation;
  DateRange test;

  /// Ranges must be well-formed, ordered train < validation < test, and disjoint.
  void validate() const;
};

/// 2017-12-07..2018-04-09 / 2018-04-10..2018-05-04 / 2018-05-07..2018-06-01.
SplitSpec default_split();

enum class WindowAssignment {
  by_target_date,  // windows over the whole series, assigned by target date
  within_split,    // windows built strictly inside each split
};

std::string_view to_string(WindowAssignment a) noexcept;
WindowAssignment window_assignment_from_string(std::string_view name);

std::vector<TimeAlignedRecord> records_in(std::span<const TimeAlignedRecord> records,
                                          const DateRange& range);

/// All windows whose days and target lie inside `range`; `name` labels errors.
/// Throws when the range holds fewer than window + 1 days.
std::vector<WindowSample> windows_within(std::span<const TimeAlignedRecord> records,
                                         const DateRange& range, const ScalerParams& scaler,
                                         std::size_t window = kDefaultWindow,
                                         std::string_view name = "range");

struct WindowedSplits {
  std::vector<WindowSample> train;
  std::vector<WindowSample> validation;
  std::vector<WindowSample> test;
};

/// Each sample pairs days t-window+1..t with target day t+1.
/// Throws if any split ends up empty, or (within_split) holds fewer than
/// window + 1 days; the message names the split.
WindowedSplits make_windows(std::span<const TimeAlignedRecord> records,
                            const ScalerParams& scaler, const SplitSpec& split,
                            std::size_t window = kDefaultWindow,
                            WindowAssignment assignment = WindowAssignment::by_target_date);

/// Debug dump, one row per (sample, day).
void write_window_dump(std::ostream& out, const WindowedSplits& splits);

}  // namespace newsblend
