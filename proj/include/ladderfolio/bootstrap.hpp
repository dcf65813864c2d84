#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ladderfolio/calendar.hpp"
#include "ladderfolio/marketdata.hpp"
#include "ladderfolio/random.hpp"
#include "ladderfolio/weighting.hpp"

namespace ladderfolio {

/// Portfolio size drawn uniformly from [lo, hi] each iteration.
struct UniformN {
    std::size_t lo = 100;
    std::size_t hi = 500;
    bool operator==(const UniformN&) const = default;
};

struct FixedN {
    std::size_t n = 10;
    bool operator==(const FixedN&) const = default;
};

using NMode = std::variant<UniformN, FixedN>;

/// `uniform:LO-HI` or `fixed:N`.
std::string to_string(const NMode& mode);
std::optional<NMode> parse_n_mode(std::string_view text);

struct BootstrapConfig {
    NMode n_mode = UniformN{};
    std::size_t iterations = 20000;
    Transform transform = Transform::Equal;
    std::uint64_t master_seed = 0;
    double initial_scale = 1e5;
    std::optional<Date> start;  // defaults to the first calendar day
    std::optional<Date> end;    // defaults to the last calendar day
    bool operator==(const BootstrapConfig&) const = default;
};

struct BootstrapDraw {
    std::size_t iteration = 0;
    double cumulative_return = 0.0;
    bool operator==(const BootstrapDraw&) const = default;
};

struct BootstrapSummary {
    double mean = 0.0;
    double median = 0.0;
    double sd = 0.0;
    double q1 = 0.0;
    double q5 = 0.0;
    double q95 = 0.0;
    double q99 = 0.0;
    std::size_t iterations = 0;
};

/// Raised when an iteration fails; carries the failing iteration index.
class BootstrapError : public std::runtime_error {
public:
    BootstrapError(std::size_t iteration, const std::string& what)
        : std::runtime_error("bootstrap iteration " + std::to_string(iteration) + ": " + what),
          iteration_(iteration)
    {
    }
    std::size_t iteration() const { return iteration_; }

private:
    std::size_t iteration_;
};

/// Picks the initial portfolio: `n` securities from `members` (duplicates
/// allowed). The default draws uniformly with replacement.
using Sampler = std::function<std::vector<SecurityIndex>(std::span<const SecurityIndex> members, std::size_t n,
                                                         Rng& rng)>;

Sampler uniform_sampler();

/// Random stream for iteration `itr`: mt19937_64 seeded with
/// stream_seed(master_seed, itr).
inline Rng iteration_rng(std::uint64_t master_seed, std::size_t itr)
{
    return Rng(stream_seed(master_seed, itr));
}

/// Transform values of every record plus returns, laid out for the
/// resampling kernel. Built once per (history, transform, horizon).
class BootstrapPanel {
public:
    BootstrapPanel(const MarketHistory& h, Transform t, std::optional<Date> start, std::optional<Date> end);

    const MarketHistory& history() const { return *history_; }
    DayIndex first_day() const { return first_; }
    DayIndex last_day() const { return last_; }
    /// f(cap) at day d.
    double weight(SecurityIndex s, DayIndex d) const { return fvalue_[s][d - history_->first_day(s)]; }
    /// Members on day d that also have a return on d (listed on d - 1).
    std::span<const SecurityIndex> replacements(DayIndex d) const { return replacements_[d - first_]; }

private:
    const MarketHistory* history_;
    DayIndex first_ = 0;
    DayIndex last_ = 0;
    std::vector<std::vector<double>> fvalue_;
    std::vector<std::vector<SecurityIndex>> replacements_;
};

/// Throws DomainError on an invalid configuration for this history.
void validate(const BootstrapConfig& cfg, const MarketHistory& h);

/// One resampling iteration: draw N, sample N members of the first day with
/// replacement, then walk the horizon. Each day a held security that is no
/// longer a member (or no longer listed) is swapped for a uniform draw from
/// that day's members; the day's return is the average of total returns
/// weighted by f(cap) at the prior close, counting duplicates by
/// multiplicity. CR = initial_scale * prod(1 + R_t). No fees.
BootstrapDraw run_iteration(const BootstrapPanel& panel, const BootstrapConfig& cfg, std::size_t itr,
                            const Sampler& sampler = {});
BootstrapDraw run_iteration(const MarketHistory& h, const BootstrapConfig& cfg, std::size_t itr,
                            const Sampler& sampler = {});

/// All iterations across `workers` OpenMP threads (0 = all available). The
/// result is ordered by iteration and independent of the worker count.
std::vector<BootstrapDraw> run_bootstrap(const MarketHistory& h, const BootstrapConfig& cfg, int workers = 0,
                                         const Sampler& sampler = {});

/// Single-threaded reference for run_bootstrap.
std::vector<BootstrapDraw> run_bootstrap_serial(const MarketHistory& h, const BootstrapConfig& cfg,
                                                const Sampler& sampler = {});

/// Mean, median (midpoint for even counts), sample sd, and lower order
/// statistic percentiles: q_p = sorted[ceil(p n) - 1]. Throws DomainError
/// on an empty input.
BootstrapSummary summarize(std::span<const BootstrapDraw> draws);

}  // namespace ladderfolio
