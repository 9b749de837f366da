// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

#include "newsblend/csv.hpp"
#include "newsblend/date.hpp"

using namespace newsblend;
using namespace std::chrono;
namespace fs = std::filesystem;

TEST(Date, DetectsBothFormats) {
  EXPECT_EQ(detect_date_format("2018-06-01"), DateFormat::iso);
  EXPECT_EQ(detect_date_format("6/1/2018"), DateFormat::us);
  EXPECT_EQ(detect_date_format("06/01/2018"), DateFormat::us);
  EXPECT_FALSE(detect_date_format("2018/06/01"));
  EXPECT_FALSE(detect_date_format("18-06-01"));
  EXPECT_FALSE(detect_date_format(""));
  EXPECT_FALSE(detect_date_format("June 1, 2018"));
}

TEST(Date, ParsesAndFormats) {
  const Date iso = parse_date("2018-06-01");
  const Date us = parse_date("6/1/2018");
  EXPECT_EQ(iso, us);
  EXPECT_EQ(iso, year{2018} / June / 1);
  EXPECT_EQ(format_date(us), "2018-06-01");
  EXPECT_EQ(format_date(parse_date("12/31/1999")), "1999-12-31");
}

TEST(Date, RejectsImpossibleAndMismatchedDates) {
  EXPECT_THROW(parse_date("2018-02-30"), std::invalid_argument);
  EXPECT_THROW(parse_date("13/01/2018"), std::invalid_argument);
  EXPECT_THROW(parse_date("2018-06-01", DateFormat::us), std::invalid_argument);
  try {
    parse_date("nope");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("'nope'"), std::string::npos);
  }
}

TEST(Date, LeapDay) {
  EXPECT_NO_THROW(parse_date("2016-02-29"));
  EXPECT_THROW(parse_date("2017-02-29"), std::invalid_argument);
}

TEST(Date, RangeIsInclusive) {
  const DateRange r{parse_date("2018-01-02"), parse_date("2018-01-05")};
  EXPECT_TRUE(r.contains(parse_date("2018-01-02")));
  EXPECT_TRUE(r.contains(parse_date("2018-01-05")));
  EXPECT_FALSE(r.contains(parse_date("2018-01-06")));
  EXPECT_FALSE(r.contains(parse_date("2018-01-01")));
}

TEST(Csv, QuotedFieldsAndLineNumbers) {
  const auto recs = parse_csv("a,b\n\n\"x, \"\"y\"\"\",2\r\n\"multi\nline\",3\n,\n");
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_EQ(recs[0].fields, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(recs[1].fields[0], "x, \"y\"");
  EXPECT_EQ(recs[1].line, 3u);
  EXPECT_EQ(recs[2].fields[0], "multi\nline");
  EXPECT_EQ(recs[2].line, 4u);
  EXPECT_EQ(recs[3].fields, (std::vector<std::string>{"", ""}));
  EXPECT_EQ(recs[3].line, 6u);
}

TEST(Csv, MissingTrailingNewlineAndEmptyInput) {
  EXPECT_EQ(parse_csv("1,2").size(), 1u);
  EXPECT_TRUE(parse_csv("").empty());
  EXPECT_TRUE(parse_csv("\n\n").empty());
}

TEST(Csv, MalformedQuotingReportsLine) {
  try {
    parse_csv("a,b\nc,\"open\n", "f.csv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.source(), "f.csv");
    EXPECT_NE(std::string(e.what()).find("unterminated"), std::string::npos);
  }
  try {
    parse_csv("a,b\nab\"c,d\n", "g.csv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(std::string(e.what()).rfind("g.csv:2: ", 0), 0u);
  }
  EXPECT_THROW(parse_csv("\"a\"b\n"), DataError);
}

TEST(Csv, EscapeRoundTrips) {
  for (std::string s : {"plain", "with,comma", "say \"hi\"", "two\nlines", ""}) {
    const auto recs = parse_csv(csv_escape(s) + ",end\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].fields[0], s);
  }
  EXPECT_EQ(csv_escape("plain"), "plain");
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2718.281828459045, 1e-300, 2773.75,
                   std::numeric_limits<double>::max(), std::numeric_limits<double>::denorm_min()}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(Files, AtomicWriteAndRead) {
  const fs::path dir = fs::temp_directory_path() / "newsblend_csv_test";
  fs::create_directories(dir);
  const fs::path p = dir / "out.txt";
  write_file_atomic(p, "first");
  write_file_atomic(p, "second\n");
  EXPECT_EQ(read_text_file(p), "second\n");
  EXPECT_FALSE(fs::exists(dir / "out.txt.tmp"));
  EXPECT_THROW(read_text_file(dir / "missing.txt"), DataError);
  EXPECT_THROW(write_file_atomic(dir / "no_such_dir" / "x.txt", "x"), DataError);
  fs::remove_all(dir);
}
