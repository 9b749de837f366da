// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace newsblend {

using Date = std::chrono::year_month_day;

enum class DateFormat { iso, us };  // YYYY-MM-DD, MM/DD/YYYY

/// Detects the format of a single date field; nullopt when neither matches.
std::optional<DateFormat> detect_date_format(std::string_view text) noexcept;

/// Parses `text` in the given format. Throws std::invalid_argument on
/// malformed or non-existent calendar dates.
Date parse_date(std::string_view text, DateFormat format);
/// Parses either format.
Date parse_date(std::string_view text);

/// ISO-8601 (YYYY-MM-DD).
std::string format_date(Date d);

struct DateRange {
  Date first;
  Date last;

  bool contains(Date d) const noexcept { return first <= d && d <= last; }
};

}  // namespace newsblend
