#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ladderfolio/calendar.hpp"

namespace ladderfolio {

/// One security's state on one trading day.
struct SecurityDay {
    std::string security_id;
    Date date;
    double close = 0.0;               // currency per share, > 0
    double shares_outstanding = 0.0;  // whole shares, > 0
    double dividend = 0.0;            // cash per share paid that day, >= 0
    bool is_member = true;

    bool operator==(const SecurityDay&) const = default;
};

using SecurityIndex = std::size_t;
using DayIndex = std::size_t;

/// Immutable daily panel of securities over a trading calendar.
///
/// Securities are stored as contiguous runs of days: a security's records
/// start on its first listed day and continue without gaps until its last
/// listed day. Securities are indexed in ascending id order and days in
/// calendar order, so two histories built from the same records in any order
/// are identical.
class MarketHistory {
public:
    MarketHistory() = default;

    /// Builds the calendar from the union of record dates. Throws DataError
    /// if any invariant fails (nonpositive close/shares, negative dividend,
    /// duplicate key, gap in a security's run).
    explicit MarketHistory(std::vector<SecurityDay> records);

    std::span<const Date> calendar() const { return calendar_; }
    std::size_t num_days() const { return calendar_.size(); }
    std::size_t num_securities() const { return series_.size(); }
    std::size_t num_records() const { return num_records_; }

    std::optional<DayIndex> day_index(Date d) const;
    /// First calendar day on or after d.
    std::optional<DayIndex> day_at_or_after(Date d) const;
    /// Last calendar day on or before d.
    std::optional<DayIndex> day_at_or_before(Date d) const;

    std::optional<SecurityIndex> find_security(std::string_view id) const;
    const std::string& security_id(SecurityIndex s) const { return series_[s].id; }

    DayIndex first_day(SecurityIndex s) const { return series_[s].first; }
    DayIndex last_day(SecurityIndex s) const { return series_[s].first + series_[s].close.size() - 1; }

    bool listed(SecurityIndex s, DayIndex d) const
    {
        const auto& ser = series_[s];
        return d >= ser.first && d - ser.first < ser.close.size();
    }
    bool is_member(SecurityIndex s, DayIndex d) const
    {
        return listed(s, d) && series_[s].member[d - series_[s].first] != 0;
    }

    // Unchecked accessors; the caller guarantees listed(s, d).
    double close(SecurityIndex s, DayIndex d) const { return series_[s].close[d - series_[s].first]; }
    double shares(SecurityIndex s, DayIndex d) const { return series_[s].shares[d - series_[s].first]; }
    double dividend(SecurityIndex s, DayIndex d) const
    {
        return series_[s].dividend[d - series_[s].first];
    }
    double market_cap(SecurityIndex s, DayIndex d) const { return close(s, d) * shares(s, d); }

    /// True when the security has records on d and d-1.
    bool has_return(SecurityIndex s, DayIndex d) const { return d > 0 && listed(s, d) && listed(s, d - 1); }

    /// Dividend-inclusive return (close_d + dividend_d) / close_{d-1} - 1.
    /// Caller guarantees has_return(s, d).
    double total_return(SecurityIndex s, DayIndex d) const
    {
        return (close(s, d) + dividend(s, d)) / close(s, d - 1) - 1.0;
    }

    /// Member securities on day d, ascending index.
    std::span<const SecurityIndex> members(DayIndex d) const { return members_[d]; }

    /// All records sorted by (date, security id).
    std::vector<SecurityDay> records() const;

    bool operator==(const MarketHistory& other) const;

private:
    struct Series {
        std::string id;
        DayIndex first = 0;
        std::vector<double> close;
        std::vector<double> shares;
        std::vector<double> dividend;
        std::vector<char> member;
        bool operator==(const Series&) const = default;
    };

    std::vector<Date> calendar_;
    std::vector<Series> series_;
    std::map<std::string, SecurityIndex, std::less<>> index_;
    std::vector<std::vector<SecurityIndex>> members_;
    std::size_t num_records_ = 0;
};

/// close x shares outstanding. Throws LookupError if there is no record.
double market_cap(const MarketHistory& h, std::string_view security_id, Date date);

/// Dividend-inclusive daily return. Throws LookupError if the record or the
/// prior calendar day's record is missing.
double total_return(const MarketHistory& h, std::string_view security_id, Date date);

/// Reads the prices CSV (`date,security_id,close,shares_outstanding,dividend,member`).
/// Errors name the 1-based file line of the offending row.
MarketHistory parse_history(std::istream& in);
MarketHistory load_history(const std::filesystem::path& path);

/// Writes the prices CSV, rows ordered by (date, security id).
void write_history(std::ostream& out, const MarketHistory& h);

/// Monthly CPI levels over a contiguous range of months.
class CpiSeries {
public:
    CpiSeries() = default;
    /// Throws DataError on an empty series or a nonpositive level.
    CpiSeries(Month first, std::vector<double> levels);

    /// Every month in [first, last] at the same level; deflation becomes the identity.
    static CpiSeries flat(Month first, Month last, double level = 100.0);

    Month first_month() const { return first_; }
    Month last_month() const;
    std::size_t size() const { return levels_.size(); }
    bool covers(Month m) const;
    /// Throws LookupError outside the series.
    double level(Month m) const;

    bool operator==(const CpiSeries&) const = default;

private:
    Month first_{};
    std::vector<double> levels_;
};

/// Month to which fee amounts quoted "in 2015 dollars" are pinned.
inline constexpr Month kCpiAnchor{std::chrono::year{2015}, std::chrono::December};

/// Converts an amount expressed in anchor-month (2015-12) dollars into
/// target-month dollars: amount x cpi(target) / cpi(2015-12).
double deflate(double amount_2015, Month target_month, const CpiSeries& cpi);

/// amount x cpi(to) / cpi(from).
double convert_dollars(double amount, Month from, Month to, const CpiSeries& cpi);

/// Reads the CPI CSV (`month,cpi`). Rows may come in any order; the months
/// must form a contiguous range.
CpiSeries parse_cpi(std::istream& in);
CpiSeries load_cpi(const std::filesystem::path& path);

}  // namespace ladderfolio
