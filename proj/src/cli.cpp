#include "ladderfolio/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ladderfolio/errors.hpp"
#include "ladderfolio/marketdata.hpp"
#include "ladderfolio/report_io.hpp"

namespace ladderfolio {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kConfigEnv = "LADDERFOLIO_CONFIG";

// Raw flag text, converted and checked after CLI11 has matched it.
struct RawFlags {
    std::string data, cpi, out;
    std::string transform = "equal", rebalance = "monthly";
    std::string start, end;
    std::string initial, admin_fee, spread_rate, risk_free, var_level;
    std::string n_mode, iterations, seed, workers;
    std::string stocks, years, drift, volatility, dividend_yield, churn, initial_cap, small_caps_drift_higher;
};

struct Parser {
    CLI::App app{"Transformational-ladder portfolio backtests and bootstrap", "ladderfolio"};
    RawFlags raw;
    std::map<Command, CLI::App*> subs;

    Parser()
    {
        app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        app.require_subcommand(1);
        app.set_help_flag("-h,--help", "Print help and exit");
        // Handled before CLI11 sees the arguments; registered for --help.
        app.add_option("--config", "Flat `key = value` file of flag values (default: $LADDERFOLIO_CONFIG)");

        auto* bt = app.add_subcommand("backtest", "Simulate one (or all) weighting strategies over a history");
        flag(bt, "--data", raw.data, "Prices CSV");
        flag(bt, "--cpi", raw.cpi, "CPI CSV (month,cpi); without it admin fees are nominal");
        flag(bt, "--out", raw.out, "Output directory");
        flag(bt, "--transform", raw.transform, "inv-square|inv|inv-sqrt|log|sqrt|identity|square|equal|all");
        flag(bt, "--rebalance", raw.rebalance, "daily|monthly|quarterly|annual");
        flag(bt, "--start", raw.start, "First day (YYYY-MM-DD), default: start of the history");
        flag(bt, "--end", raw.end, "Last day (YYYY-MM-DD), default: end of the history");
        flag(bt, "--initial", raw.initial, "Initial capital (default 100000)");
        flag(bt, "--admin-fee", raw.admin_fee, "Admin fee per trade in 2015 dollars (default 1)");
        flag(bt, "--spread-rate", raw.spread_rate, "Round-trip bid-ask spread rate (default 0.001)");
        flag(bt, "--risk-free", raw.risk_free, "Annual risk-free rate for Sharpe (default 0.0175)");
        flag(bt, "--var-level", raw.var_level, "VaR level (default 0.05)");
        subs[Command::Backtest] = bt;

        auto* bs = app.add_subcommand("bootstrap", "Resample random portfolios over a history");
        flag(bs, "--data", raw.data, "Prices CSV");
        flag(bs, "--out", raw.out, "Output directory");
        flag(bs, "--transform", raw.transform, "Weighting transform (default equal)");
        flag(bs, "--n-mode", raw.n_mode, "uniform:LO-HI or fixed:N (default uniform:100-500)");
        flag(bs, "--iterations", raw.iterations, "Number of draws (default 20000)");
        flag(bs, "--seed", raw.seed, "Master seed (default 0)");
        flag(bs, "--workers", raw.workers, "Threads, 0 = all cores (default 0)");
        flag(bs, "--start", raw.start, "First day, default: start of the history");
        flag(bs, "--end", raw.end, "Last day, default: end of the history");
        flag(bs, "--initial", raw.initial, "Initial scale of each draw (default 100000)");
        subs[Command::Bootstrap] = bs;

        auto* mt = app.add_subcommand("metrics", "Risk and return metrics of a returns.csv or values.csv");
        flag(mt, "--data", raw.data, "returns.csv (date,daily_return) or values.csv (date,value)");
        flag(mt, "--out", raw.out, "Output directory");
        flag(mt, "--risk-free", raw.risk_free, "Annual risk-free rate (default 0.0175)");
        flag(mt, "--var-level", raw.var_level, "VaR level (default 0.05)");
        subs[Command::Metrics] = mt;

        auto* sy = app.add_subcommand("synth", "Generate a seeded synthetic prices CSV");
        flag(sy, "--out", raw.out, "Output directory");
        flag(sy, "--stocks", raw.stocks, "Members per day (default 50)");
        flag(sy, "--years", raw.years, "Years of trading days (default 10)");
        flag(sy, "--seed", raw.seed, "Seed (default 0)");
        flag(sy, "--start", raw.start, "First calendar day (default 1958-01-02)");
        flag(sy, "--drift", raw.drift, "Annual log-drift range LO:HI (default 0.02:0.14)");
        flag(sy, "--volatility", raw.volatility, "Annual volatility range LO:HI (default 0.15:0.45)");
        flag(sy, "--dividend-yield", raw.dividend_yield, "Annual dividend yield range LO:HI (default 0:0.04)");
        flag(sy, "--churn", raw.churn, "Expected membership replacements per year (default 0)");
        flag(sy, "--initial-cap", raw.initial_cap, "Initial market cap range LO:HI, log-uniform (default 1e8:1e11)");
        flag(sy, "--small-caps-drift-higher", raw.small_caps_drift_higher,
             "true: smaller initial caps get strictly higher drift");
        subs[Command::Synth] = sy;
    }

    static void flag(CLI::App* sub, const std::string& name, std::string& target, const std::string& help)
    {
        sub->add_option(name, target, help);
    }

    bool knows(Command c, const std::string& key) const
    {
        return subs.at(c)->get_option_no_throw("--" + key) != nullptr;
    }
};

std::optional<Command> parse_command(std::string_view s)
{
    if (s == "backtest") return Command::Backtest;
    if (s == "bootstrap") return Command::Bootstrap;
    if (s == "metrics") return Command::Metrics;
    if (s == "synth") return Command::Synth;
    return std::nullopt;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("--config: cannot open " + path);
    }
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string text = trim(line);
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + " line " + std::to_string(row) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(text).substr(0, eq));
        if (key.starts_with("--")) {
            key.erase(0, 2);
        }
        out.emplace_back(key, trim(std::string_view(text).substr(eq + 1)));
    }
    return out;
}

// ---- value conversion -----------------------------------------------------

double to_double(const std::string& flag, const std::string& text)
{
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw UsageError(flag + ": expected a number, got '" + text + "'");
    }
    return v;
}

template <class Int>
Int to_integer(const std::string& flag, const std::string& text)
{
    Int v{};
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, v);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw UsageError(flag + ": expected a nonnegative integer, got '" + text + "'");
    }
    return v;
}

Date to_date(const std::string& flag, const std::string& text)
{
    const auto d = parse_date(text);
    if (!d) {
        throw UsageError(flag + ": expected a date YYYY-MM-DD, got '" + text + "'");
    }
    return *d;
}

Interval to_interval(const std::string& flag, const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw UsageError(flag + ": expected LO:HI, got '" + text + "'");
    }
    Interval iv{to_double(flag, text.substr(0, colon)), to_double(flag, text.substr(colon + 1))};
    if (iv.lo > iv.hi) {
        throw UsageError(flag + ": LO must not exceed HI in '" + text + "'");
    }
    return iv;
}

bool to_bool(const std::string& flag, const std::string& text)
{
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw UsageError(flag + ": expected true or false, got '" + text + "'");
}

std::string transform_hint(std::string text)
{
    text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
    static const std::map<std::string, std::string, std::less<>> aliases{
        {"1/x^2", "inv-square"}, {"1/x2", "inv-square"},  {"1/x²", "inv-square"}, {"x^-2", "inv-square"},
        {"1/x", "inv"},          {"x^-1", "inv"},         {"1/sqrt(x)", "inv-sqrt"}, {"1/sqrtx", "inv-sqrt"},
        {"1/√x", "inv-sqrt"},    {"x^-0.5", "inv-sqrt"},  {"log(x)", "log"},       {"logx", "log"},
        {"ln", "log"},           {"ln(x)", "log"},        {"sqrt(x)", "sqrt"},     {"sqrtx", "sqrt"},
        {"√x", "sqrt"},          {"x^0.5", "sqrt"},       {"x", "identity"},       {"mkc", "identity"},
        {"cap", "identity"},     {"x^2", "square"},       {"x²", "square"},        {"equ", "equal"},
        {"ew", "equal"},         {"1/n", "equal"},
    };
    const auto it = aliases.find(text);
    return it == aliases.end() ? std::string() : it->second;
}

Transform to_transform(const std::string& text)
{
    if (const auto t = parse_transform(text)) {
        return *t;
    }
    std::string msg = "--transform: unknown transform '" + text + "'";
    if (const auto hint = transform_hint(text); !hint.empty()) {
        msg += "; did you mean '" + hint + "'?";
    }
    throw UsageError(msg + " (choices: inv-square, inv, inv-sqrt, log, sqrt, identity, square, equal)");
}

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw UsageError(message);
    }
}

void require_input_file(const std::string& flag, const std::string& path)
{
    require(!path.empty(), flag + " is required");
    std::error_code ec;
    require(std::filesystem::is_regular_file(path, ec), flag + ": no such file '" + path + "'");
}

RunConfig convert(Command command, const CLI::App& sub, const RawFlags& raw)
{
    auto given = [&](const char* name) { return sub.get_option_no_throw(name) && sub.count(name) > 0; };

    RunConfig cfg;
    cfg.command = command;
    require(!raw.out.empty(), "--out is required");
    cfg.output_dir = raw.out;

    if (command != Command::Synth) {
        require_input_file("--data", raw.data);
        cfg.data_path = raw.data;
    }
    if (given("--cpi")) {
        require_input_file("--cpi", raw.cpi);
        cfg.cpi_path = raw.cpi;
    }
    if (given("--risk-free")) {
        cfg.risk.risk_free_rate = to_double("--risk-free", raw.risk_free);
        require(cfg.risk.risk_free_rate >= 0.0, "--risk-free must be nonnegative");
    }
    if (given("--var-level")) {
        cfg.risk.var_level = to_double("--var-level", raw.var_level);
        require(cfg.risk.var_level > 0.0 && cfg.risk.var_level < 1.0, "--var-level must lie in (0, 1)");
    }
    std::optional<Date> start;
    std::optional<Date> end;
    if (given("--start")) start = to_date("--start", raw.start);
    if (given("--end")) end = to_date("--end", raw.end);
    if (start && end && command != Command::Synth) {
        require(std::chrono::sys_days{*start} < std::chrono::sys_days{*end}, "--start must be before --end");
    }
    std::optional<double> initial;
    if (given("--initial")) {
        initial = to_double("--initial", raw.initial);
        require(*initial > 0.0, "--initial must be positive");
    }

    switch (command) {
    case Command::Backtest: {
        auto& b = cfg.backtest;
        if (raw.transform == "all") {
            b.transforms.assign(kAllTransforms.begin(), kAllTransforms.end());
        } else {
            b.transforms = {to_transform(raw.transform)};
        }
        const auto f = parse_frequency(raw.rebalance);
        require(f.has_value(), "--rebalance: expected daily, monthly, quarterly or annual, got '" + raw.rebalance + "'");
        b.rebalance = *f;
        b.start = start;
        b.end = end;
        if (initial) b.initial_capital = *initial;
        if (given("--admin-fee")) {
            b.fees.admin_fee_2015 = to_double("--admin-fee", raw.admin_fee);
            require(b.fees.admin_fee_2015 >= 0.0, "--admin-fee must be nonnegative");
        }
        if (given("--spread-rate")) {
            b.fees.spread_rate = to_double("--spread-rate", raw.spread_rate);
            require(b.fees.spread_rate >= 0.0 && b.fees.spread_rate < 1.0, "--spread-rate must lie in [0, 1)");
        }
        break;
    }
    case Command::Bootstrap: {
        auto& b = cfg.bootstrap;
        require(raw.transform != "all", "--transform: 'all' is only available for backtest");
        b.transform = to_transform(raw.transform);
        if (given("--n-mode")) {
            const auto mode = parse_n_mode(raw.n_mode);
            require(mode.has_value(), "--n-mode: expected uniform:LO-HI or fixed:N with 1 <= LO <= HI, got '"
                                          + raw.n_mode + "'");
            b.n_mode = *mode;
        }
        if (given("--iterations")) {
            b.iterations = to_integer<std::size_t>("--iterations", raw.iterations);
            require(b.iterations >= 1, "--iterations must be at least 1");
        }
        if (given("--seed")) b.master_seed = to_integer<std::uint64_t>("--seed", raw.seed);
        if (given("--workers")) cfg.workers = to_integer<int>("--workers", raw.workers);
        b.start = start;
        b.end = end;
        if (initial) b.initial_scale = *initial;
        break;
    }
    case Command::Metrics:
        break;
    case Command::Synth: {
        auto& s = cfg.synth;
        if (given("--stocks")) s.n_securities = to_integer<std::size_t>("--stocks", raw.stocks);
        if (given("--years")) s.n_years = to_integer<std::size_t>("--years", raw.years);
        if (given("--seed")) s.seed = to_integer<std::uint64_t>("--seed", raw.seed);
        if (start) s.start = *start;
        if (given("--drift")) s.drift = to_interval("--drift", raw.drift);
        if (given("--volatility")) s.volatility = to_interval("--volatility", raw.volatility);
        if (given("--dividend-yield")) s.dividend_yield = to_interval("--dividend-yield", raw.dividend_yield);
        if (given("--churn")) s.membership_churn_rate = to_double("--churn", raw.churn);
        if (given("--initial-cap")) s.initial_cap = to_interval("--initial-cap", raw.initial_cap);
        if (given("--small-caps-drift-higher")) {
            s.small_caps_drift_higher = to_bool("--small-caps-drift-higher", raw.small_caps_drift_higher);
        }
        validate(s);
        break;
    }
    }
    return cfg;
}

// ---- commands ---------------------------------------------------------------

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body)
{
    std::ostringstream ss;
    body(ss);
    write_text_file(path, ss.str());
}

std::string dump(const ordered_json& j)
{
    return j.dump(2) + "\n";
}

void run_backtest_command(const RunConfig& cfg, std::ostream& out)
{
    const MarketHistory h = load_history(cfg.data_path);
    const std::optional<CpiSeries> cpi = cfg.cpi_path ? std::optional<CpiSeries>(load_cpi(*cfg.cpi_path))
                                                      : std::nullopt;
    const auto& opts = cfg.backtest;
    const bool fan_out = opts.transforms.size() > 1;

    for (const Transform t : opts.transforms) {
        BacktestConfig bc;
        bc.transform = t;
        bc.policy = {opts.rebalance, opts.fees};
        bc.start_date = opts.start.value_or(h.calendar().front());
        bc.end_date = opts.end.value_or(h.calendar().back());
        bc.initial_capital = opts.initial_capital.value_or(
            default_initial_capital(bc.start_date, cpi ? &*cpi : nullptr));

        const BacktestReport report = cpi ? run_backtest(h, *cpi, bc) : run_backtest(h, bc);
        const PerformanceSummary metrics = summarize_report(report, cfg.risk);

        RunConfig single = cfg;
        single.backtest.transforms = {t};
        single.output_dir = fan_out ? cfg.output_dir / std::string(to_string(t)) : cfg.output_dir;
        std::filesystem::create_directories(single.output_dir);

        write_text_file(single.output_dir / "report.json", dump(report_json(report, metrics, echo_config(single))));
        write_file(single.output_dir / "values.csv", [&](std::ostream& o) { write_values_csv(o, report); });
        write_file(single.output_dir / "returns.csv", [&](std::ostream& o) { write_returns_csv(o, report); });
        write_file(single.output_dir / "fees.csv", [&](std::ostream& o) { write_fees_csv(o, report); });

        out << to_string(t) << ": final value " << format_fixed(report.final_value, 2) << ", fees "
            << format_fixed(report.fee_ledger.total, 2);
        if (report.bankrupt) {
            out << ", bankrupt on " << format_date(*report.bankruptcy_date);
        }
        out << '\n';
    }
}

void run_bootstrap_command(const RunConfig& cfg, std::ostream& out)
{
    const MarketHistory h = load_history(cfg.data_path);
    const auto draws = run_bootstrap(h, cfg.bootstrap, cfg.workers);
    const auto summary = summarize(draws);

    std::filesystem::create_directories(cfg.output_dir);
    write_file(cfg.output_dir / "draws.csv", [&](std::ostream& o) { write_draws_csv(o, draws); });
    write_text_file(cfg.output_dir / "summary.json", dump(summary_json(summary, cfg.bootstrap, echo_config(cfg))));
    out << "bootstrap " << to_string(cfg.bootstrap.transform) << ": " << summary.iterations
        << " draws, median " << format_fixed(summary.median, 2) << '\n';
}

void run_metrics_command(const RunConfig& cfg, std::ostream& out)
{
    const DatedSeries series = load_dated_series(cfg.data_path);
    const PerformanceSummary m = summarize_dated_series(series, cfg.risk);

    ordered_json j;
    j["config"] = echo_config(cfg);
    j["input_kind"] = series.kind == DatedSeries::Kind::Returns ? "returns" : "values";
    j["observations"] = series.values.size();
    j["metrics"] = metrics_json(m);
    // Flattened too, so `sharpe` etc. sit at the top level.
    const ordered_json flat = j["metrics"];
    for (const auto& [k, v] : flat.items()) {
        j[k] = v;
    }
    std::filesystem::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir / "metrics.json", dump(j));
    out << "metrics: cagr " << format_exact(m.cagr) << '\n';
}

void run_synth_command(const RunConfig& cfg, std::ostream& out)
{
    const MarketHistory h = generate_synthetic(cfg.synth);
    std::filesystem::create_directories(cfg.output_dir);
    write_file(cfg.output_dir / "prices.csv", [&](std::ostream& o) { write_history(o, h); });
    out << "synth: " << h.num_securities() << " securities, " << h.num_days() << " days\n";
}

}  // namespace

double default_initial_capital(Date start, const CpiSeries* cpi)
{
    const Month base{std::chrono::year{1958}, std::chrono::January};
    const Month m = month_of(start);
    if (cpi == nullptr || !cpi->covers(base) || !cpi->covers(m)) {
        return kDefaultCapital1958;
    }
    return convert_dollars(kDefaultCapital1958, base, m, *cpi);
}

std::string_view to_string(Command c)
{
    switch (c) {
    case Command::Backtest: return "backtest";
    case Command::Bootstrap: return "bootstrap";
    case Command::Metrics: return "metrics";
    case Command::Synth: return "synth";
    }
    return "?";
}

RunConfig parse_args(const std::vector<std::string>& args)
{
    std::optional<std::string> config_path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            require(i + 1 < args.size(), "--config needs a file path");
            config_path = args[++i];
        } else if (args[i].starts_with("--config=")) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!config_path) {
        if (const char* env = std::getenv(kConfigEnv.data()); env && *env) {
            config_path = env;
        }
    }

    Parser p;
    const auto command = rest.empty() ? std::nullopt : parse_command(rest.front());
    if (config_path && command) {
        std::vector<std::string> from_file;
        for (const auto& [key, value] : read_config_file(*config_path)) {
            const bool anywhere = std::any_of(p.subs.begin(), p.subs.end(),
                                              [&](const auto& kv) { return p.knows(kv.first, key); });
            require(anywhere, *config_path + ": unknown key '" + key + "'");
            if (p.knows(*command, key)) {
                from_file.push_back("--" + key + "=" + value);
            }
        }
        rest.insert(rest.begin() + 1, from_file.begin(), from_file.end());
    }

    std::vector<std::string> reversed(rest.rbegin(), rest.rend());
    try {
        p.app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream o, err;
        p.app.exit(e, o, err);
        throw HelpRequested{o.str()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    const CLI::App* sub = p.subs.at(*parse_command(p.app.get_subcommands().front()->get_name()));
    return convert(*parse_command(sub->get_name()), *sub, p.raw);
}

ordered_json echo_config(const RunConfig& cfg)
{
    ordered_json j;
    j["command"] = std::string(to_string(cfg.command));
    auto put = [&](const char* key, const std::string& value) { j[key] = value; };
    auto put_date = [&](const char* key, const std::optional<Date>& d) {
        if (d) put(key, format_date(*d));
    };
    auto put_interval = [&](const char* key, const Interval& iv) {
        put(key, format_exact(iv.lo) + ":" + format_exact(iv.hi));
    };

    switch (cfg.command) {
    case Command::Backtest: {
        const auto& b = cfg.backtest;
        put("data", cfg.data_path.string());
        if (cfg.cpi_path) put("cpi", cfg.cpi_path->string());
        put("out", cfg.output_dir.string());
        const bool all = std::equal(b.transforms.begin(), b.transforms.end(), kAllTransforms.begin(),
                                    kAllTransforms.end());
        put("transform", all ? std::string("all") : std::string(to_string(b.transforms.front())));
        put("rebalance", std::string(to_string(b.rebalance)));
        put_date("start", b.start);
        put_date("end", b.end);
        if (b.initial_capital) put("initial", format_exact(*b.initial_capital));
        put("admin-fee", format_exact(b.fees.admin_fee_2015));
        put("spread-rate", format_exact(b.fees.spread_rate));
        put("risk-free", format_exact(cfg.risk.risk_free_rate));
        put("var-level", format_exact(cfg.risk.var_level));
        break;
    }
    case Command::Bootstrap: {
        const auto& b = cfg.bootstrap;
        put("data", cfg.data_path.string());
        put("out", cfg.output_dir.string());
        put("transform", std::string(to_string(b.transform)));
        put("n-mode", to_string(b.n_mode));
        put("iterations", std::to_string(b.iterations));
        put("seed", std::to_string(b.master_seed));
        put_date("start", b.start);
        put_date("end", b.end);
        put("initial", format_exact(b.initial_scale));
        break;
    }
    case Command::Metrics:
        put("data", cfg.data_path.string());
        put("out", cfg.output_dir.string());
        put("risk-free", format_exact(cfg.risk.risk_free_rate));
        put("var-level", format_exact(cfg.risk.var_level));
        break;
    case Command::Synth: {
        const auto& s = cfg.synth;
        put("out", cfg.output_dir.string());
        put("stocks", std::to_string(s.n_securities));
        put("years", std::to_string(s.n_years));
        put("seed", std::to_string(s.seed));
        put("start", format_date(s.start));
        put_interval("drift", s.drift);
        put_interval("volatility", s.volatility);
        put_interval("dividend-yield", s.dividend_yield);
        put("churn", format_exact(s.membership_churn_rate));
        put_interval("initial-cap", s.initial_cap);
        put("small-caps-drift-higher", s.small_caps_drift_higher ? "true" : "false");
        break;
    }
    }
    return j;
}

std::vector<std::string> echo_to_args(const ordered_json& echo)
{
    std::vector<std::string> args{echo.at("command").get<std::string>()};
    for (const auto& [key, value] : echo.items()) {
        if (key != "command") {
            args.push_back("--" + key + "=" + value.get<std::string>());
        }
    }
    return args;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        switch (cfg.command) {
        case Command::Backtest: run_backtest_command(cfg, out); break;
        case Command::Bootstrap: run_bootstrap_command(cfg, out); break;
        case Command::Metrics: run_metrics_command(cfg, out); break;
        case Command::Synth: run_synth_command(cfg, out); break;
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const LookupError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
    RunConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const HelpRequested& h) {
        out << h.text;
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nrun 'ladderfolio --help' for the list of commands and flags\n";
        return kExitUsage;
    }
    return run(cfg, out, err);
}

}  // namespace ladderfolio
