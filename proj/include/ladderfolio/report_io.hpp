#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ladderfolio/backtest.hpp"
#include "ladderfolio/bootstrap.hpp"
#include "ladderfolio/calendar.hpp"
#include "ladderfolio/metrics.hpp"

namespace ladderfolio {

/// printf("%.*f"). Used for currency.
std::string format_fixed(double v, int digits);

/// Shortest form that reads back to the same double (%.17g).
std::string format_exact(double v);

// Backtest artifacts.
void write_values_csv(std::ostream& out, const BacktestReport& r);   // date,value
void write_returns_csv(std::ostream& out, const BacktestReport& r);  // date,daily_return
void write_fees_csv(std::ostream& out, const BacktestReport& r);     // date,admin,spread (fee days only)

nlohmann::ordered_json metrics_json(const PerformanceSummary& m);

/// The report document: config echo, headline numbers, fee ledger, period
/// returns, and the metrics object.
nlohmann::ordered_json report_json(const BacktestReport& r, const PerformanceSummary& m,
                                   const nlohmann::ordered_json& config_echo);

// Bootstrap artifacts.
void write_draws_csv(std::ostream& out, std::span<const BootstrapDraw> draws);  // iteration,cumulative_return
nlohmann::ordered_json summary_json(const BootstrapSummary& s, const BootstrapConfig& cfg,
                                    const nlohmann::ordered_json& config_echo);

/// A dated series read back from values.csv or returns.csv.
struct DatedSeries {
    enum class Kind { Values, Returns };
    Kind kind = Kind::Returns;
    std::vector<Date> dates;
    std::vector<double> values;
};

/// Reads either CSV; the header decides the kind. Throws DataError.
DatedSeries parse_dated_series(std::istream& in);
DatedSeries load_dated_series(const std::filesystem::path& path);

/// Metrics of a series read from disk. A returns series is compounded as is
/// (cagr from the product of 1 + r); a values series is turned into returns
/// value_t / value_{t-1} - 1 with the first value as the base.
PerformanceSummary summarize_dated_series(const DatedSeries& s, const RiskParams& p);

/// Writes `text` to `path`, throwing DataError if the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ladderfolio
