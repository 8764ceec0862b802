#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "difftree/csv.hpp"
#include "difftree/date.hpp"

namespace difftree {
namespace {

TEST(DateTest, ParsesFullDates) {
  const auto d = parse_date("2004-02-01");
  ASSERT_TRUE(d);
  EXPECT_FALSE(d->year_only);
  EXPECT_EQ(d->date, Date::from_ymd(2004, 2, 1));
  EXPECT_EQ(d->date.to_string(), "2004-02-01");
  EXPECT_EQ(d->date.year(), 2004);
}

TEST(DateTest, YearOnlyNormalizesToJanuaryFirst) {
  const auto d = parse_date("2003");
  ASSERT_TRUE(d);
  EXPECT_TRUE(d->year_only);
  EXPECT_EQ(d->date, Date::from_ymd(2003, 1, 1));
}

TEST(DateTest, RejectsMalformedAndImpossibleDates) {
  for (const char* bad : {"", "2003-1-01", "2003/01/01", "2003-02-30", "2001-02-29", "abcd",
                          "2003-13-01", "20030101", " 2003"}) {
    EXPECT_FALSE(parse_date(bad)) << bad;
  }
  EXPECT_TRUE(parse_date("2000-02-29"));
}

TEST(DateTest, DifferencesAreInDays) {
  EXPECT_EQ(Date::from_ymd(2002, 1, 1) - Date::from_ymd(2001, 1, 1), 365);
  EXPECT_EQ(Date::from_ymd(2001, 1, 1) - Date::from_ymd(2000, 1, 1), 366);
  EXPECT_EQ(Date::from_ymd(2000, 1, 1) + 366, Date::from_ymd(2001, 1, 1));
  EXPECT_LT(Date::from_ymd(1999, 6, 1), Date::from_ymd(2000, 1, 1));
}

TEST(CsvTest, QuotesOnlyWhenNeeded) {
  std::ostringstream out;
  csv::write_row(out, {"plain", "with,comma", "say \"hi\"", ""});
  EXPECT_EQ(out.str(), "plain,\"with,comma\",\"say \"\"hi\"\"\",\n");
}

TEST(CsvTest, RandomRowsRoundTrip) {
  std::mt19937_64 rng(7);
  const std::string alphabet = "ab,\"\n x";
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<std::string>> rows(1 + rng() % 4);
    for (auto& row : rows) {
      row.resize(1 + rng() % 5);
      for (auto& field : row) {
        const std::size_t len = rng() % 6;
        for (std::size_t i = 0; i < len; ++i) field.push_back(alphabet[rng() % alphabet.size()]);
      }
      // A lone empty field is indistinguishable from a blank line.
      if (row.size() == 1 && row[0].empty()) row[0] = "z";
    }
    std::stringstream buf;
    for (const auto& row : rows) csv::write_row(buf, row);
    for (const auto& row : rows) {
      const auto read = csv::read_row(buf);
      ASSERT_TRUE(read);
      EXPECT_EQ(*read, row);
    }
    EXPECT_FALSE(csv::read_row(buf));
  }
}

TEST(CsvTest, UnterminatedQuoteThrows) {
  std::istringstream in("\"open,field\n");
  EXPECT_THROW(csv::read_row(in), std::runtime_error);
}

}  // namespace
}  // namespace difftree
