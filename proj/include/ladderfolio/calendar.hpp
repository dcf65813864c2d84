#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace ladderfolio {

using Date = std::chrono::year_month_day;
using Month = std::chrono::year_month;

/// Parses YYYY-MM-DD. Returns nullopt on anything else, including
/// impossible dates such as 2015-02-30.
std::optional<Date> parse_date(std::string_view text);

/// Parses YYYY-MM.
std::optional<Month> parse_month(std::string_view text);

std::string format_date(Date d);
std::string format_month(Month m);

inline Month month_of(Date d) { return Month{d.year(), d.month()}; }

inline int year_of(Date d) { return static_cast<int>(d.year()); }

inline long days_between(Date from, Date to)
{
    return (std::chrono::sys_days{to} - std::chrono::sys_days{from}).count();
}

inline bool is_weekday(Date d)
{
    const std::chrono::weekday wd{std::chrono::sys_days{d}};
    return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

}  // namespace ladderfolio
