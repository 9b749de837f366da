// SPDX-License-Identifier: Apache-2.0
#include "newsblend/date.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace newsblend {

namespace {

bool digits(std::string_view s) noexcept {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

std::optional<DateFormat> detect_date_format(std::string_view t) noexcept {
  if (t.size() == 10 && t[4] == '-' && t[7] == '-' && digits(t.substr(0, 4)) &&
      digits(t.substr(5, 2)) && digits(t.substr(8, 2))) {
    return DateFormat::iso;
  }
  const auto s1 = t.find('/');
  const auto s2 = t.rfind('/');
  if (s1 != std::string_view::npos && s2 != s1 && t.size() - s2 - 1 == 4 &&
      digits(t.substr(0, s1)) && s1 <= 2 && digits(t.substr(s1 + 1, s2 - s1 - 1)) &&
      s2 - s1 - 1 <= 2 && digits(t.substr(s2 + 1))) {
    return DateFormat::us;
  }
  return std::nullopt;
}

Date parse_date(std::string_view text, DateFormat format) {
  if (detect_date_format(text) != format) {
    throw std::invalid_argument("malformed date '" + std::string(text) + "' (expected " +
                                (format == DateFormat::iso ? "YYYY-MM-DD" : "MM/DD/YYYY") + ")");
  }
  int y = 0, m = 0, d = 0;
  if (format == DateFormat::iso) {
    y = to_int(text.substr(0, 4));
    m = to_int(text.substr(5, 2));
    d = to_int(text.substr(8, 2));
  } else {
    const auto s1 = text.find('/');
    const auto s2 = text.rfind('/');
    m = to_int(text.substr(0, s1));
    d = to_int(text.substr(s1 + 1, s2 - s1 - 1));
    y = to_int(text.substr(s2 + 1));
  }
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw std::invalid_argument("invalid calendar date '" + std::string(text) + "'");
  return date;
}

Date parse_date(std::string_view text) {
  const auto fmt = detect_date_format(text);
  if (!fmt) throw std::invalid_argument("unrecognized date '" + std::string(text) + "'");
  return parse_date(text, *fmt);
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

}  // namespace newsblend
