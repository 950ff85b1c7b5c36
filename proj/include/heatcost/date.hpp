#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace heatcost {

/// Calendar date without time zone. Text form is ISO `YYYY-MM-DD`.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::sys_days days) : days_(days) {}
  explicit Date(std::chrono::year_month_day ymd) : days_(std::chrono::sys_days(ymd)) {
    if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
  }
  Date(int y, unsigned m, unsigned d)
      : Date(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}) {}

  /// Strict `YYYY-MM-DD`; rejects impossible dates such as 2022-02-30.
  static Date parse(std::string_view text) {
    auto fail = [&] { return std::invalid_argument("invalid date '" + std::string(text) + "', expected YYYY-MM-DD"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw fail();
    int fields[3] = {0, 0, 0};
    const std::size_t starts[3] = {0, 5, 8};
    const std::size_t lens[3] = {4, 2, 2};
    for (int f = 0; f < 3; ++f) {
      for (std::size_t k = 0; k < lens[f]; ++k) {
        const char c = text[starts[f] + k];
        if (c < '0' || c > '9') throw fail();
        fields[f] = fields[f] * 10 + (c - '0');
      }
    }
    std::chrono::year_month_day ymd{std::chrono::year{fields[0]}, std::chrono::month{static_cast<unsigned>(fields[1])},
                                    std::chrono::day{static_cast<unsigned>(fields[2])}};
    if (!ymd.ok()) throw fail();
    return Date(ymd);
  }

  std::chrono::sys_days days() const noexcept { return days_; }
  std::chrono::year_month_day ymd() const noexcept { return std::chrono::year_month_day{days_}; }

  Date plus_days(int n) const { return Date(days_ + std::chrono::days{n}); }

  std::string to_string() const {
    const auto d = ymd();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                  static_cast<unsigned>(d.day()));
    return buf;
  }

  friend bool operator==(const Date& a, const Date& b) { return a.days_ == b.days_; }
  friend std::strong_ordering operator<=>(const Date& a, const Date& b) {
    return a.days_.time_since_epoch().count() <=> b.days_.time_since_epoch().count();
  }

 private:
  std::chrono::sys_days days_{};
};

/// Default split between pre-war and war-time quotes.
inline const Date kWarStart{2022, 2, 24};

}  // namespace heatcost
