#pragma once

#include <cstddef>
#include <cstdint>

#include "ladderfolio/marketdata.hpp"

namespace ladderfolio {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool operator==(const Interval&) const = default;
};

/// Parameters for the seeded synthetic market generator.
struct SynthConfig {
    std::size_t n_securities = 50;
    std::size_t n_years = 10;
    Interval drift{0.02, 0.14};            // annualized GBM drift mu
    Interval volatility{0.15, 0.45};       // annualized
    Interval dividend_yield{0.0, 0.04};    // annualized, paid quarterly
    double membership_churn_rate = 0.0;    // expected replacements per year
    std::uint64_t seed = 0;
    Date start{std::chrono::year{1958}, std::chrono::January, std::chrono::day{2}};
    Interval initial_cap{1e8, 1e11};       // drawn log-uniformly
    /// Assign drifts so that a smaller initial cap always gets a strictly
    /// higher drift.
    bool small_caps_drift_higher = false;

    bool operator==(const SynthConfig&) const = default;
};

/// Throws UsageError on an invalid configuration.
void validate(const SynthConfig& cfg);

/// Trading calendar used by the generator: each month contributes its first
/// 21 weekdays (fewer if the month has fewer), which gives the 252-day year.
std::vector<Date> synthetic_calendar(Date start, std::size_t n_years);

inline constexpr std::size_t kTradingDaysPerMonth = 21;
inline constexpr double kTradingDaysPerYear = 252.0;

/// Geometric random-walk prices per security with drift and volatility drawn
/// from the configured ranges, quarterly dividends, and membership churn that
/// keeps exactly n_securities members on every day. A pure function of cfg.
MarketHistory generate_synthetic(const SynthConfig& cfg);

}  // namespace ladderfolio
