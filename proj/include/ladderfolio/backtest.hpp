#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ladderfolio/calendar.hpp"
#include "ladderfolio/marketdata.hpp"
#include "ladderfolio/weighting.hpp"

namespace ladderfolio {

enum class Frequency { Daily, Monthly, Quarterly, Annual };

std::string_view to_string(Frequency f);
std::optional<Frequency> parse_frequency(std::string_view text);

struct FeeSchedule {
    double admin_fee_2015 = 1.0;  // per trade, 2015 dollars
    double spread_rate = 0.001;   // round-trip bid-ask spread as a fraction of close
    bool operator==(const FeeSchedule&) const = default;
};

inline constexpr FeeSchedule kNoFees{0.0, 0.0};

struct RebalancePolicy {
    Frequency frequency = Frequency::Monthly;
    FeeSchedule fees;
    bool operator==(const RebalancePolicy&) const = default;
};

/// Fees charged by one trade or accumulated over a day.
struct FeeRecord {
    double admin = 0.0;
    double spread = 0.0;
    std::size_t trades = 0;

    double total() const { return admin + spread; }
    FeeRecord& operator+=(const FeeRecord& o)
    {
        admin += o.admin;
        spread += o.spread;
        trades += o.trades;
        return *this;
    }
};

/// Admin charge for one trade executed in `month`. With a CPI series the
/// 2015-dollar fee is deflated to that month; without one it is nominal.
double admin_fee(const FeeSchedule& fees, Month month, const CpiSeries* cpi);

/// Fee for trading |delta_shares| at `close`: one admin charge plus half the
/// round-trip spread on the traded value. Zero for a zero delta.
FeeRecord trade_fee(double delta_shares, double close, Month month, const FeeSchedule& fees,
                    const CpiSeries* cpi);

/// Weighted average return sum(w_i r_i) / sum(w_i). Throws DomainError on a
/// length mismatch or when the weights sum to zero.
double index_return(std::span<const double> weights, std::span<const double> returns);

/// Keyed form; the two maps must have the same support.
double index_return(const std::map<std::string, double, std::less<>>& weights,
                    const std::map<std::string, double, std::less<>>& returns);

/// Portfolio snapshot at a close. Shares may be fractional.
struct PortfolioState {
    Date date;
    double value = 0.0;
    std::map<std::string, double, std::less<>> holdings;  // shares
    double cash = 0.0;
};

struct RebalanceOutcome {
    PortfolioState state;
    FeeRecord fees;
    bool bankrupt = false;
};

/// Trades `state` to `targets` at the closes of state.date and pays the fees
/// out of the portfolio.
///
/// The post-trade value x of the traded legs solves
///     sum_T w_i x + fees(x) = budget,
/// where fees(x) = admin * |T| + spread/2 * sum_T |w_i x - a_i| and a_i is the
/// current value of leg i. Every share traded is paid for, so the portfolio
/// ends fully invested with no cash. A leg whose required trade is below
/// 1e-9 of the portfolio value is left alone. If the fees cannot be paid even
/// by liquidating everything, the outcome is bankrupt.
RebalanceOutcome rebalance(const MarketHistory& h, const PortfolioState& state, const TargetWeights& targets,
                           const FeeSchedule& fees, const CpiSeries* cpi);

/// Relative size below which a rebalance trade is skipped.
inline constexpr double kDustFraction = 1e-9;

struct BacktestConfig {
    Transform transform = Transform::Equal;
    RebalancePolicy policy;
    Date start_date;
    Date end_date;
    double initial_capital = 100000.0;
    bool operator==(const BacktestConfig&) const = default;
};

struct FeeLedger {
    double admin_total = 0.0;
    double spread_total = 0.0;
    double total = 0.0;
};

struct BacktestReport {
    BacktestConfig config;
    double initial_capital = 0.0;

    // One entry per trading day from the first day to the last simulated day.
    std::vector<Date> dates;
    std::vector<double> values;        // after that day's fees
    std::vector<double> daily_returns; // gross index return; 0 on the first day
    std::vector<FeeRecord> daily_fees;

    std::vector<std::pair<Month, double>> monthly_returns;
    std::vector<std::pair<int, double>> annual_returns;

    FeeLedger fee_ledger;
    double final_value = 0.0;
    bool bankrupt = false;
    std::optional<Date> bankruptcy_date;
};

using DayObserver = std::function<void(const PortfolioState&)>;

/// Simulates one strategy day by day.
///
/// At the first day's close the cash is invested at target weights. Each
/// later day the index return is the weighted average of holdings' total
/// returns with weights equal to the prior close values (cash is a
/// zero-return sleeve); dividends are credited to cash. On the first trading
/// day of each rebalance period the book is re-targeted at the close to
/// transform weights of that close's caps, so those weights apply to the
/// next day's return. A held security whose listing ends is sold at its last
/// close, and it is excluded from targets on that day.
BacktestReport run_backtest(const MarketHistory& h, const CpiSeries& cpi, const BacktestConfig& cfg,
                            const DayObserver& observer = {});

/// Same, with admin fees taken as nominal amounts (no CPI adjustment).
BacktestReport run_backtest(const MarketHistory& h, const BacktestConfig& cfg, const DayObserver& observer = {});

/// Calendar-year returns: value at the year's last day over the prior year's
/// last value (or initial capital for the first year), minus one.
std::vector<std::pair<int, double>> annualize_report(const BacktestReport& report);

/// Calendar-month returns on the same convention.
std::vector<std::pair<Month, double>> monthly_report_returns(const BacktestReport& report);

}  // namespace ladderfolio
