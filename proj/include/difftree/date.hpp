#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace difftree {

// Calendar date at day precision. Differences are measured in whole days.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}

  static Date from_ymd(int year, unsigned month, unsigned day);

  int year() const;
  std::chrono::sys_days sys_days() const { return days_; }

  // "YYYY-MM-DD"
  std::string to_string() const;

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

  friend long operator-(const Date& lhs, const Date& rhs) {
    return static_cast<long>((lhs.days_ - rhs.days_).count());
  }
  friend Date operator+(const Date& d, long days) {
    return Date(d.days_ + std::chrono::days(days));
  }

 private:
  std::chrono::sys_days days_{};
};

struct ParsedDate {
  Date date;
  bool year_only = false;
};

// Accepts "YYYY-MM-DD" or a bare "YYYY" (normalized to January 1).
// Returns nullopt on anything else, including impossible calendar dates.
std::optional<ParsedDate> parse_date(std::string_view text);

// Accepted publication date range, inclusive on both ends.
Date min_pub_date();
Date max_pub_date();

}  // namespace difftree
