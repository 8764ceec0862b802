#include "difftree/date.hpp"

#include <charconv>
#include <cstdio>

namespace difftree {

namespace {

bool parse_uint(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  return Date(std::chrono::sys_days{std::chrono::year{year} / std::chrono::month{month} /
                                    std::chrono::day{day}});
}

int Date::year() const {
  return static_cast<int>(std::chrono::year_month_day{days_}.year());
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<ParsedDate> parse_date(std::string_view text) {
  int year = 0;
  int month = 1;
  int day = 1;
  bool year_only = false;
  if (text.size() == 4) {
    if (!parse_uint(text, year)) return std::nullopt;
    year_only = true;
  } else if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    if (!parse_uint(text.substr(0, 4), year) || !parse_uint(text.substr(5, 2), month) ||
        !parse_uint(text.substr(8, 2), day)) {
      return std::nullopt;
    }
  } else {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  return ParsedDate{Date(std::chrono::sys_days{ymd}), year_only};
}

Date min_pub_date() { return Date::from_ymd(1900, 1, 1); }
Date max_pub_date() { return Date::from_ymd(2100, 1, 1); }

}  // namespace difftree
