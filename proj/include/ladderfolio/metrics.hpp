#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ladderfolio/calendar.hpp"
#include "ladderfolio/marketdata.hpp"

namespace ladderfolio {

struct BacktestReport;

enum class Horizon { Daily, Monthly, Annual };

std::string_view to_string(Horizon h);

struct ReturnSeries {
    Horizon horizon = Horizon::Annual;
    std::vector<double> values;
};

struct RiskParams {
    double risk_free_rate = 0.0175;
    double var_level = 0.05;
    bool operator==(const RiskParams&) const = default;
};

/// Throws DomainError unless 0 < var_level < 1 and risk_free_rate >= 0.
void validate(const RiskParams& p);

/// (final / initial)^(1 / years) - 1.
double cagr(double initial, double final_value, double years);

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator). Throws DomainError for n < 2.
double sample_sd(std::span<const double> values);
MeanSd mean_sd(const ReturnSeries& s);

/// (mean - risk_free) / sd over annual returns. Throws DomainError if the
/// series is not annual, is shorter than 2, or has zero dispersion.
double sharpe(const ReturnSeries& s, const RiskParams& p);

/// Number of tail observations used at `level`: ceil(level * n), at least 1.
std::size_t tail_count(std::size_t n, double level);

/// Historical VaR: the k-th smallest return, k = tail_count(n, level).
double value_at_risk(std::span<const double> returns, double level);

/// Expected shortfall: mean of the k smallest returns.
double conditional_value_at_risk(std::span<const double> returns, double level);

inline constexpr std::array<double, 3> kGrowthThresholds{0.5, 1.0, 2.0};

/// Number of securities whose close-to-close price growth over calendar
/// `year` reached each threshold. The base is the last trading day of the
/// prior year, or the year's first trading day when the history starts in
/// `year`; a security counts if it is a member on the year's last trading day
/// and has closes on both boundary days. Dividends are excluded. Throws
/// DomainError if the year is not covered by the history.
std::vector<std::size_t> growth_counts(const MarketHistory& h, int year,
                                       std::span<const double> thresholds = kGrowthThresholds);

/// Compounds dated daily returns into calendar-month or calendar-year returns.
std::vector<double> compound_returns(std::span<const Date> dates, std::span<const double> daily, Horizon horizon);

/// Everything the run report carries under `metrics`. Statistics that the
/// series is too short for are left empty.
struct PerformanceSummary {
    double cagr = 0.0;
    std::optional<double> mean_annual;
    std::optional<double> sd_annual;
    std::optional<double> sharpe;
    std::optional<double> var_annual;
    std::optional<double> var_monthly;
    std::optional<double> var_daily;
    std::optional<double> cvar_annual;
    std::optional<double> cvar_monthly;
    std::optional<double> cvar_daily;
};

/// Metrics from annual, monthly and daily return series and a cagr.
PerformanceSummary summarize_series(double cagr_value, std::span<const double> annual,
                                    std::span<const double> monthly, std::span<const double> daily,
                                    const RiskParams& p);

/// Metrics of a backtest. Annual and monthly returns are value based (net of
/// fees); daily returns are net too: value_t / value_{t-1} - 1.
PerformanceSummary summarize_report(const BacktestReport& report, const RiskParams& p);

/// Years between two dates on a 365.25-day year.
double years_between(Date from, Date to);

}  // namespace ladderfolio
