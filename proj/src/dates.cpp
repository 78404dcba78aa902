#include "aipse/dates.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace aipse::dates {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

std::optional<Date> parse_iso(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto y = text.substr(0, 4), m = text.substr(5, 2), d = text.substr(8, 2);
    if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
    Date date{std::chrono::year{std::stoi(std::string(y))},
              std::chrono::month{static_cast<unsigned>(std::stoi(std::string(m)))},
              std::chrono::day{static_cast<unsigned>(std::stoi(std::string(d)))}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string to_iso(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

Date add_months(const Date& d, int months) {
    auto ym = d.year() / d.month() + std::chrono::months{months};
    std::chrono::year_month_day_last last{ym.year(), std::chrono::month_day_last{ym.month()}};
    return Date{ym.year(), ym.month(), std::min(d.day(), last.day())};
}

}  // namespace aipse::dates
