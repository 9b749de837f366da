// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace newsblend {

/// Error tied to a location in an input file.
class DataError : public std::runtime_error {
 public:
  DataError(std::string source, std::size_t line, const std::string& what);
  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and newlines.
/// Blank lines are skipped; CRLF is accepted.
std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& source = "<csv>");

std::string csv_escape(std::string_view field);

/// 17 significant digits; round-trips every finite double exactly.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace newsblend
