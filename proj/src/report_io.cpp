#include "ladderfolio/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ladderfolio/errors.hpp"

namespace ladderfolio {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v)
{
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_number(const std::string& text, std::size_t row)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw DataError("row " + std::to_string(row) + ": bad number '" + text + "'");
    }
    return v;
}

}  // namespace

std::string format_fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string format_exact(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_values_csv(std::ostream& out, const BacktestReport& r)
{
    out << "date,value\n";
    for (std::size_t i = 0; i < r.dates.size(); ++i) {
        out << format_date(r.dates[i]) << ',' << format_fixed(r.values[i], 6) << '\n';
    }
}

void write_returns_csv(std::ostream& out, const BacktestReport& r)
{
    out << "date,daily_return\n";
    for (std::size_t i = 0; i < r.dates.size(); ++i) {
        out << format_date(r.dates[i]) << ',' << format_exact(r.daily_returns[i]) << '\n';
    }
}

void write_fees_csv(std::ostream& out, const BacktestReport& r)
{
    out << "date,admin,spread\n";
    for (std::size_t i = 0; i < r.dates.size(); ++i) {
        const auto& f = r.daily_fees[i];
        if (f.admin == 0.0 && f.spread == 0.0) {
            continue;
        }
        out << format_date(r.dates[i]) << ',' << format_fixed(f.admin, 2) << ',' << format_fixed(f.spread, 2)
            << '\n';
    }
}

ordered_json metrics_json(const PerformanceSummary& m)
{
    ordered_json j;
    j["cagr"] = m.cagr;
    j["mean_annual"] = optional_number(m.mean_annual);
    j["sd_annual"] = optional_number(m.sd_annual);
    j["sharpe"] = optional_number(m.sharpe);
    j["var_annual"] = optional_number(m.var_annual);
    j["var_monthly"] = optional_number(m.var_monthly);
    j["var_daily"] = optional_number(m.var_daily);
    j["cvar_annual"] = optional_number(m.cvar_annual);
    j["cvar_monthly"] = optional_number(m.cvar_monthly);
    j["cvar_daily"] = optional_number(m.cvar_daily);
    return j;
}

ordered_json report_json(const BacktestReport& r, const PerformanceSummary& m, const ordered_json& config_echo)
{
    ordered_json j;
    j["config"] = config_echo;
    j["transform"] = std::string(to_string(r.config.transform));
    j["rebalance"] = std::string(to_string(r.config.policy.frequency));
    j["start_date"] = r.dates.empty() ? std::string() : format_date(r.dates.front());
    j["end_date"] = r.dates.empty() ? std::string() : format_date(r.dates.back());
    j["trading_days"] = r.dates.size();
    j["initial_capital"] = format_fixed(r.initial_capital, 6);
    j["final_value"] = format_fixed(r.final_value, 6);
    j["bankrupt"] = r.bankrupt;
    j["bankruptcy_date"] = r.bankruptcy_date ? ordered_json(format_date(*r.bankruptcy_date)) : ordered_json(nullptr);

    std::size_t trades = 0;
    for (const auto& f : r.daily_fees) {
        trades += f.trades;
    }
    j["fee_ledger"] = {{"admin_total", format_fixed(r.fee_ledger.admin_total, 2)},
                       {"spread_total", format_fixed(r.fee_ledger.spread_total, 2)},
                       {"total", format_fixed(r.fee_ledger.total, 2)},
                       {"trades", trades}};

    auto annual = ordered_json::array();
    for (const auto& [year, ret] : r.annual_returns) {
        annual.push_back({{"year", year}, {"return", ret}});
    }
    j["annual_returns"] = annual;
    auto monthly = ordered_json::array();
    for (const auto& [month, ret] : r.monthly_returns) {
        monthly.push_back({{"month", format_month(month)}, {"return", ret}});
    }
    j["monthly_returns"] = monthly;
    j["metrics"] = metrics_json(m);
    return j;
}

void write_draws_csv(std::ostream& out, std::span<const BootstrapDraw> draws)
{
    out << "iteration,cumulative_return\n";
    for (const auto& d : draws) {
        out << d.iteration << ',' << format_exact(d.cumulative_return) << '\n';
    }
}

ordered_json summary_json(const BootstrapSummary& s, const BootstrapConfig& cfg, const ordered_json& config_echo)
{
    ordered_json j;
    j["n_mode"] = to_string(cfg.n_mode);
    j["iterations"] = cfg.iterations;
    j["transform"] = std::string(to_string(cfg.transform));
    j["master_seed"] = cfg.master_seed;
    j["mean"] = s.mean;
    j["median"] = s.median;
    j["sd"] = s.sd;
    j["q1"] = s.q1;
    j["q5"] = s.q5;
    j["q95"] = s.q95;
    j["q99"] = s.q99;
    j["config"] = config_echo;
    return j;
}

DatedSeries parse_dated_series(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty series file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    DatedSeries s;
    if (line == "date,daily_return") {
        s.kind = DatedSeries::Kind::Returns;
    } else if (line == "date,value") {
        s.kind = DatedSeries::Kind::Values;
    } else {
        throw DataError("row 1: expected header 'date,daily_return' or 'date,value', got '" + line + "'");
    }
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 2) {
            throw DataError("row " + std::to_string(row) + ": expected 2 fields, got " + std::to_string(cells.size()));
        }
        const auto date = parse_date(cells[0]);
        if (!date) {
            throw DataError("row " + std::to_string(row) + ": bad date '" + cells[0] + "'");
        }
        if (!s.dates.empty() && !(std::chrono::sys_days{s.dates.back()} < std::chrono::sys_days{*date})) {
            throw DataError("row " + std::to_string(row) + ": dates must be strictly increasing");
        }
        s.dates.push_back(*date);
        s.values.push_back(parse_number(cells[1], row));
    }
    if (s.dates.empty()) {
        throw DataError("series file has no rows");
    }
    return s;
}

DatedSeries load_dated_series(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return parse_dated_series(in);
}

PerformanceSummary summarize_dated_series(const DatedSeries& s, const RiskParams& p)
{
    std::vector<Date> dates;
    std::vector<double> daily;
    if (s.kind == DatedSeries::Kind::Returns) {
        dates = s.dates;
        daily = s.values;
    } else {
        for (std::size_t i = 1; i < s.values.size(); ++i) {
            if (!(s.values[i - 1] > 0.0)) {
                break;  // nothing is earned after the value hits zero
            }
            dates.push_back(s.dates[i]);
            daily.push_back(s.values[i] / s.values[i - 1] - 1.0);
        }
    }
    double growth = 1.0;
    for (double r : daily) {
        growth *= 1.0 + r;
    }
    const double years = years_between(s.dates.front(), s.dates.back());
    const double g = years > 0.0 ? cagr(1.0, std::max(growth, 0.0), years) : 0.0;
    const auto annual = compound_returns(dates, daily, Horizon::Annual);
    const auto monthly = compound_returns(dates, daily, Horizon::Monthly);
    return summarize_series(g, annual, monthly, daily, p);
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

}  // namespace ladderfolio
