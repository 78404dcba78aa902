#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace aipse::dates {

using Date = std::chrono::year_month_day;

// Parses "YYYY-MM-DD". Returns nullopt on anything else.
std::optional<Date> parse_iso(std::string_view text);

std::string to_iso(const Date& d);

// Calendar-month addition; the day is clamped to the last day of the
// target month (2025-08-31 + 6 -> 2026-02-28).
Date add_months(const Date& d, int months);

}  // namespace aipse::dates
