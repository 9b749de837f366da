// SPDX-License-Identifier: Apache-2.0
#include "newsblend/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace newsblend {

DataError::DataError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string{}) + ": " +
                         what),
      source_(std::move(source)),
      line_(line) {}

std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& source) {
  std::vector<CsvRecord> out;
  CsvRecord rec;
  std::string field;
  std::size_t line = 1;
  bool in_quotes = false;
  bool field_started = false;  // distinguishes an empty line from a line with one empty field
  bool was_quoted = false;
  rec.line = 1;

  auto end_field = [&] {
    rec.fields.push_back(std::move(field));
    field.clear();
    was_quoted = false;
  };
  auto end_record = [&] {
    if (field_started || !rec.fields.empty()) {
      end_field();
      out.push_back(std::move(rec));
    }
    rec = CsvRecord{};
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || was_quoted) {
          throw DataError(source, line, "unexpected quote inside unquoted field");
        }
        in_quotes = true;
        was_quoted = true;
        if (!field_started) rec.line = line;
        field_started = true;
        break;
      case ',':
        if (!field_started) rec.line = line;
        field_started = true;
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        rec.line = line;
        break;
      default:
        if (was_quoted) throw DataError(source, line, "text after closing quote");
        if (!field_started) rec.line = line;
        field_started = true;
        field.push_back(c);
    }
  }
  if (in_quotes) throw DataError(source, line, "unterminated quoted field");
  end_record();
  return out;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(path.string(), 0, "cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw DataError(path.string(), 0, "write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    const std::string reason = ec.message();
    std::filesystem::remove(tmp, ec);
    throw DataError(path.string(), 0, "rename failed: " + reason);
  }
}

}  // namespace newsblend
