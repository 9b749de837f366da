// SPDX-License-Identifier: Apache-2.0
#include "newsblend/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>

#include "newsblend/csv.hpp"

namespace newsblend {

namespace {

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

constexpr std::array<std::string_view, 6> kColumns = {"date",    "wsj",     "reuters",
                                                      "cnbc",    "fortune", "adj_close"};

}  // namespace

LoadedDataset load_csv(const std::filesystem::path& path) {
  return parse_dataset_csv(read_text_file(path), path.string());
}

LoadedDataset parse_dataset_csv(std::string_view text, const std::string& source) {
  const auto rows = parse_csv(text, source);
  if (rows.empty()) throw DataError(source, 0, "file is empty");
  const auto& header = rows.front();
  bool header_ok = header.fields.size() == kColumns.size();
  for (std::size_t j = 0; header_ok && j < kColumns.size(); ++j) {
    header_ok = trim(header.fields[j]) == kColumns[j];
  }
  if (!header_ok) {
    throw DataError(source, header.line,
                    "header must be '" + std::string(kDatasetHeader) + "'");
  }

  LoadedDataset out;
  std::optional<DateFormat> format;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != kColumns.size()) {
      throw DataError(source, row.line,
                      "expected 6 fields, found " + std::to_string(row.fields.size()));
    }
    const bool missing = std::any_of(row.fields.begin(), row.fields.end(),
                                     [](const std::string& f) { return trim(f).empty(); });
    if (missing) {
      ++out.dropped_rows;
      out.dropped_lines.push_back(row.line);
      continue;
    }

    TimeAlignedRecord rec;
    const auto date_text = trim(row.fields[0]);
    const auto detected = detect_date_format(date_text);
    if (!detected) throw DataError(source, row.line, "unparseable date '" + std::string(date_text) + "'");
    if (format && *format != *detected) {
      throw DataError(source, row.line, "date format differs from earlier rows");
    }
    format = detected;
    try {
      rec.date = parse_date(date_text, *detected);
    } catch (const std::invalid_argument& e) {
      throw DataError(source, row.line, e.what());
    }

    for (std::size_t j = 1; j < kColumns.size(); ++j) {
      const auto field = trim(row.fields[j]);
      const auto v = parse_real(field);
      if (!v) {
        throw DataError(source, row.line, "column " + std::string(kColumns[j]) +
                                              ": unparseable number '" + std::string(field) + "'");
      }
      if (j <= 4) {
        if (*v < -1.0 || *v > 1.0) {
          throw DataError(source, row.line, "column " + std::string(kColumns[j]) +
                                                ": compound " + std::string(field) +
                                                " outside [-1, 1]");
        }
        rec.compounds[j - 1] = *v;
      } else {
        if (!(*v > 0.0)) {
          throw DataError(source, row.line, "column adj_close: price must be > 0, got " +
                                                std::string(field));
        }
        rec.adj_close = *v;
      }
    }
    out.records.push_back(rec);
  }

  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const auto& a, const auto& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < out.records.size(); ++i) {
    if (out.records[i].date == out.records[i - 1].date) {
      throw DataError(source, 0, "duplicate date " + format_date(out.records[i].date));
    }
  }
  if (out.records.empty()) throw DataError(source, 0, "no complete rows after dropping nulls");
  return out;
}

ScalerParams fit_scaler(std::span<const double> prices) {
  if (prices.empty()) throw std::invalid_argument("fit_scaler: no prices");
  const auto [lo, hi] = std::minmax_element(prices.begin(), prices.end());
  if (!(*hi > *lo)) {
    throw std::invalid_argument("fit_scaler: need at least two distinct prices");
  }
  return ScalerParams{*lo, *hi};
}

ScalerParams fit_scaler(std::span<const TimeAlignedRecord> records) {
  std::vector<double> prices;
  prices.reserve(records.size());
  for (const auto& r : records) prices.push_back(r.adj_close);
  return fit_scaler(prices);
}

void SplitSpec::validate() const {
  const std::array<std::pair<std::string_view, const DateRange*>, 3> ranges = {
      {{"train", &train}, {"validation", &validation}, {"test", &test}}};
  for (const auto& [name, r] : ranges) {
    if (!r->first.ok() || !r->last.ok() || r->last < r->first) {
      throw std::invalid_argument("split " + std::string(name) + ": range is empty or malformed");
    }
  }
  if (!(train.last < validation.first) || !(validation.last < test.first)) {
    throw std::invalid_argument("splits must be ordered train < validation < test and disjoint");
  }
}

SplitSpec default_split() {
  using namespace std::chrono;
  return SplitSpec{
      DateRange{2017y / December / 7, 2018y / April / 9},
      DateRange{2018y / April / 10, 2018y / May / 4},
      DateRange{2018y / May / 7, 2018y / June / 1},
  };
}

std::string_view to_string(WindowAssignment a) noexcept {
  return a == WindowAssignment::by_target_date ? "by_target_date" : "within_split";
}

WindowAssignment window_assignment_from_string(std::string_view name) {
  if (name == "by_target_date") return WindowAssignment::by_target_date;
  if (name == "within_split") return WindowAssignment::within_split;
  throw std::invalid_argument("unknown split mode '" + std::string(name) +
                              "' (expected by_target_date or within_split)");
}

std::vector<TimeAlignedRecord> records_in(std::span<const TimeAlignedRecord> records,
                                          const DateRange& range) {
  std::vector<TimeAlignedRecord> out;
  for (const auto& r : records) {
    if (range.contains(r.date)) out.push_back(r);
  }
  return out;
}

namespace {

/// Window ending at index `last` (inclusive), target at last + 1.
WindowSample window_at(std::span<const TimeAlignedRecord> recs, std::size_t last,
                       std::size_t window, const ScalerParams& scaler) {
  WindowSample s;
  s.inputs = Matrix(window, kFeatureCount);
  const std::size_t first = last + 1 - window;
  for (std::size_t t = 0; t < window; ++t) {
    const auto& r = recs[first + t];
    for (std::size_t j = 0; j < 4; ++j) s.inputs(t, j) = r.compounds[j];
    s.inputs(t, 4) = scaler.scale(r.adj_close);
  }
  const auto& target = recs[last + 1];
  s.target = scaler.scale(target.adj_close);
  s.target_date = target.date;
  s.target_close = target.adj_close;
  s.prev_actual_close = recs[last].adj_close;
  return s;
}

}  // namespace

std::vector<WindowSample> windows_within(std::span<const TimeAlignedRecord> records,
                                         const DateRange& range, const ScalerParams& scaler,
                                         std::size_t window, std::string_view name) {
  if (window < 1) throw std::invalid_argument("windows_within: window must be >= 1");
  const auto inside = records_in(records, range);
  if (inside.size() < window + 1) {
    throw std::invalid_argument("split " + std::string(name) + " has " +
                                std::to_string(inside.size()) + " days; window " +
                                std::to_string(window) + " needs at least " +
                                std::to_string(window + 1));
  }
  std::vector<WindowSample> out;
  for (std::size_t last = window - 1; last + 1 < inside.size(); ++last) {
    out.push_back(window_at(inside, last, window, scaler));
  }
  return out;
}

WindowedSplits make_windows(std::span<const TimeAlignedRecord> records,
                            const ScalerParams& scaler, const SplitSpec& split,
                            std::size_t window, WindowAssignment assignment) {
  split.validate();
  if (window < 1) throw std::invalid_argument("make_windows: window must be >= 1");
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (!(records[i - 1].date < records[i].date)) {
      throw std::invalid_argument("make_windows: records must have strictly increasing dates");
    }
  }

  WindowedSplits out;
  const std::array<std::tuple<std::string_view, const DateRange*, std::vector<WindowSample>*>, 3>
      parts = {{{"train", &split.train, &out.train},
                {"validation", &split.validation, &out.validation},
                {"test", &split.test, &out.test}}};

  if (assignment == WindowAssignment::by_target_date) {
    for (std::size_t last = window - 1; last + 1 < records.size(); ++last) {
      const Date target = records[last + 1].date;
      for (const auto& [name, range, dest] : parts) {
        if (range->contains(target)) {
          dest->push_back(window_at(records, last, window, scaler));
          break;
        }
      }
    }
  } else {
    for (const auto& [name, range, dest] : parts) {
      *dest = windows_within(records, *range, scaler, window, name);
    }
  }

  for (const auto& [name, range, dest] : parts) {
    if (dest->empty()) {
      throw std::invalid_argument("split " + std::string(name) + " received no window samples");
    }
  }
  return out;
}

void write_window_dump(std::ostream& out, const WindowedSplits& splits) {
  out << "split,sample,step,wsj,reuters,cnbc,fortune,scaled_close,target,target_date\n";
  const std::array<std::pair<std::string_view, const std::vector<WindowSample>*>, 3> parts = {
      {{"train", &splits.train}, {"validation", &splits.validation}, {"test", &splits.test}}};
  for (const auto& [name, samples] : parts) {
    for (std::size_t s = 0; s < samples->size(); ++s) {
      const auto& sample = (*samples)[s];
      for (std::size_t t = 0; t < sample.inputs.rows(); ++t) {
        out << name << ',' << s << ',' << t;
        for (double v : sample.inputs.row(t)) out << ',' << format_double(v);
        out << ',' << format_double(sample.target) << ',' << format_date(sample.target_date)
            << '\n';
      }
    }
  }
}

}  // namespace newsblend
