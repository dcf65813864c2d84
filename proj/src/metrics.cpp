#include "ladderfolio/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ladderfolio/backtest.hpp"
#include "ladderfolio/errors.hpp"

namespace ladderfolio {

std::string_view to_string(Horizon h)
{
    switch (h) {
    case Horizon::Daily: return "daily";
    case Horizon::Monthly: return "monthly";
    case Horizon::Annual: return "annual";
    }
    return "?";
}

void validate(const RiskParams& p)
{
    if (!(p.var_level > 0.0 && p.var_level < 1.0)) {
        throw DomainError("VaR level must lie strictly between 0 and 1");
    }
    if (!(p.risk_free_rate >= 0.0)) {
        throw DomainError("risk-free rate must be nonnegative");
    }
}

double cagr(double initial, double final_value, double years)
{
    if (!(initial > 0.0) || !(final_value >= 0.0) || !(years > 0.0)) {
        throw DomainError("cagr needs initial > 0, final >= 0, years > 0");
    }
    return std::pow(final_value / initial, 1.0 / years) - 1.0;
}

double mean(std::span<const double> values)
{
    if (values.empty()) {
        throw DomainError("mean of an empty series");
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values)
{
    if (values.size() < 2) {
        throw DomainError("sample standard deviation needs at least two observations");
    }
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

MeanSd mean_sd(const ReturnSeries& s)
{
    return {mean(s.values), sample_sd(s.values)};
}

double sharpe(const ReturnSeries& s, const RiskParams& p)
{
    if (s.horizon != Horizon::Annual) {
        throw DomainError("sharpe is defined on annual returns");
    }
    const auto [m, sd] = mean_sd(s);
    if (sd == 0.0) {
        throw DomainError("sharpe is undefined for a series with zero standard deviation");
    }
    return (m - p.risk_free_rate) / sd;
}

std::size_t tail_count(std::size_t n, double level)
{
    // The epsilon keeps exact products such as 0.05 * 20 from rounding up.
    const double k = std::ceil(level * static_cast<double>(n) - 1e-9);
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(k, 1.0)), 1, n);
}

double value_at_risk(std::span<const double> returns, double level)
{
    if (returns.empty()) {
        throw DomainError("VaR of an empty series");
    }
    std::vector<double> sorted(returns.begin(), returns.end());
    const std::size_t k = tail_count(sorted.size(), level);
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
    return sorted[k - 1];
}

double conditional_value_at_risk(std::span<const double> returns, double level)
{
    if (returns.empty()) {
        throw DomainError("cVaR of an empty series");
    }
    std::vector<double> sorted(returns.begin(), returns.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = tail_count(sorted.size(), level);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sum += sorted[i];
    }
    return sum / static_cast<double>(k);
}

std::vector<std::size_t> growth_counts(const MarketHistory& h, int year, std::span<const double> thresholds)
{
    const auto cal = h.calendar();
    std::optional<DayIndex> year_first;
    std::optional<DayIndex> year_last;
    for (DayIndex d = 0; d < cal.size(); ++d) {
        if (year_of(cal[d]) == year) {
            if (!year_first) {
                year_first = d;
            }
            year_last = d;
        }
    }
    if (!year_first) {
        throw DomainError("history does not cover year " + std::to_string(year));
    }
    const DayIndex base = *year_first > 0 ? *year_first - 1 : *year_first;
    const DayIndex end = *year_last;

    std::vector<std::size_t> counts(thresholds.size(), 0);
    for (SecurityIndex s : h.members(end)) {
        if (!h.listed(s, base)) {
            continue;
        }
        const double ratio = h.close(s, end) / h.close(s, base);
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            if (ratio >= (1.0 + thresholds[i]) * (1.0 - 1e-12)) {
                ++counts[i];
            }
        }
    }
    return counts;
}

std::vector<double> compound_returns(std::span<const Date> dates, std::span<const double> daily, Horizon horizon)
{
    if (dates.size() != daily.size()) {
        throw DomainError("dates and returns differ in length");
    }
    if (horizon == Horizon::Daily) {
        return {daily.begin(), daily.end()};
    }
    auto key = [horizon](Date d) {
        return horizon == Horizon::Annual ? year_of(d) : year_of(d) * 12 + static_cast<int>(static_cast<unsigned>(d.month()));
    };
    std::vector<double> out;
    double growth = 1.0;
    for (std::size_t i = 0; i < daily.size(); ++i) {
        growth *= 1.0 + daily[i];
        if (i + 1 == daily.size() || key(dates[i + 1]) != key(dates[i])) {
            out.push_back(growth - 1.0);
            growth = 1.0;
        }
    }
    return out;
}

PerformanceSummary summarize_series(double cagr_value, std::span<const double> annual,
                                    std::span<const double> monthly, std::span<const double> daily,
                                    const RiskParams& p)
{
    validate(p);
    PerformanceSummary out;
    out.cagr = cagr_value;
    if (!annual.empty()) {
        out.mean_annual = mean(annual);
        out.var_annual = value_at_risk(annual, p.var_level);
        out.cvar_annual = conditional_value_at_risk(annual, p.var_level);
    }
    if (annual.size() >= 2) {
        out.sd_annual = sample_sd(annual);
        if (*out.sd_annual > 0.0) {
            out.sharpe = (*out.mean_annual - p.risk_free_rate) / *out.sd_annual;
        }
    }
    if (!monthly.empty()) {
        out.var_monthly = value_at_risk(monthly, p.var_level);
        out.cvar_monthly = conditional_value_at_risk(monthly, p.var_level);
    }
    if (!daily.empty()) {
        out.var_daily = value_at_risk(daily, p.var_level);
        out.cvar_daily = conditional_value_at_risk(daily, p.var_level);
    }
    return out;
}

PerformanceSummary summarize_report(const BacktestReport& report, const RiskParams& p)
{
    std::vector<double> annual;
    for (const auto& [y, r] : report.annual_returns) {
        annual.push_back(r);
    }
    std::vector<double> monthly;
    for (const auto& [m, r] : report.monthly_returns) {
        monthly.push_back(r);
    }
    std::vector<double> daily;
    double prev = report.initial_capital;
    for (double v : report.values) {
        daily.push_back(prev > 0.0 ? v / prev - 1.0 : 0.0);
        prev = v;
    }
    double growth = 0.0;
    if (!report.dates.empty()) {
        const double years = years_between(report.dates.front(), report.dates.back());
        growth = years > 0.0 ? cagr(report.initial_capital, report.final_value, years) : 0.0;
    }
    return summarize_series(growth, annual, monthly, daily, p);
}

double years_between(Date from, Date to)
{
    return static_cast<double>(days_between(from, to)) / 365.25;
}

}  // namespace ladderfolio
