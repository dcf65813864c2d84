#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ladderfolio/backtest.hpp"
#include "ladderfolio/bootstrap.hpp"
#include "ladderfolio/metrics.hpp"
#include "ladderfolio/synthetic.hpp"

namespace ladderfolio {

enum class Command { Backtest, Bootstrap, Metrics, Synth };

std::string_view to_string(Command c);

/// Backtest settings before the history is known (dates may be open).
struct BacktestOptions {
    std::vector<Transform> transforms{Transform::Equal};  // `--transform all` lists all eight
    Frequency rebalance = Frequency::Monthly;
    FeeSchedule fees;
    std::optional<Date> start;
    std::optional<Date> end;
    /// Unset: $100,000 of 1958, CPI-scaled to the start month when a CPI
    /// series covering both months is given, else 100000 nominal.
    std::optional<double> initial_capital;
    bool operator==(const BacktestOptions&) const = default;
};

struct RunConfig {
    Command command = Command::Backtest;
    std::filesystem::path data_path;
    std::optional<std::filesystem::path> cpi_path;
    std::filesystem::path output_dir;

    BacktestOptions backtest;
    BootstrapConfig bootstrap;
    SynthConfig synth;
    RiskParams risk;

    /// Bootstrap threads, 0 = all cores. Results do not depend on it, so it
    /// is not part of the echoed config.
    int workers = 0;

    bool operator==(const RunConfig&) const = default;
};

/// Default starting capital in 1958-01 dollars.
inline constexpr double kDefaultCapital1958 = 100000.0;

/// Capital for a run starting at `start` when none is given.
double default_initial_capital(Date start, const CpiSeries* cpi);

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitRuntime = 4;

/// Thrown by parse_args for --help; carries the help text.
struct HelpRequested {
    std::string text;
};

/// Parses `<command> [flags]` (argv without the program name). Values from
/// the config file named by --config, or else by $LADDERFOLIO_CONFIG, are
/// applied first so that flags win. Throws UsageError naming the offending
/// flag, or HelpRequested.
RunConfig parse_args(const std::vector<std::string>& args);

/// Flag-name -> value map of every setting the command uses, as strings that
/// parse back to the same values.
nlohmann::ordered_json echo_config(const RunConfig& cfg);

/// Inverse of echo_config: `<command> --flag value ...`.
std::vector<std::string> echo_to_args(const nlohmann::ordered_json& echo);

/// Validates, loads inputs, runs the command and writes its artifacts.
/// Returns an exit status; errors are reported on `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + run with exit-status mapping, for main().
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ladderfolio
