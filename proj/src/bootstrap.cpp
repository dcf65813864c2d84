#include "ladderfolio/bootstrap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <omp.h>

#include "ladderfolio/errors.hpp"

namespace ladderfolio {

namespace {

std::optional<std::size_t> parse_count(std::string_view text)
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return v;
}

std::size_t draw_portfolio_size(const NMode& mode, Rng& rng)
{
    if (const auto* fixed = std::get_if<FixedN>(&mode)) {
        return fixed->n;
    }
    const auto& u = std::get<UniformN>(mode);
    return u.lo + static_cast<std::size_t>(rng.uniform_index(u.hi - u.lo + 1));
}

}  // namespace

std::string to_string(const NMode& mode)
{
    if (const auto* fixed = std::get_if<FixedN>(&mode)) {
        return "fixed:" + std::to_string(fixed->n);
    }
    const auto& u = std::get<UniformN>(mode);
    return "uniform:" + std::to_string(u.lo) + "-" + std::to_string(u.hi);
}

std::optional<NMode> parse_n_mode(std::string_view text)
{
    if (text.starts_with("fixed:")) {
        const auto n = parse_count(text.substr(6));
        if (!n || *n == 0) {
            return std::nullopt;
        }
        return FixedN{*n};
    }
    if (text.starts_with("uniform:")) {
        const auto body = text.substr(8);
        const auto dash = body.find('-');
        if (dash == std::string_view::npos) {
            return std::nullopt;
        }
        const auto lo = parse_count(body.substr(0, dash));
        const auto hi = parse_count(body.substr(dash + 1));
        if (!lo || !hi || *lo == 0 || *lo > *hi) {
            return std::nullopt;
        }
        return UniformN{*lo, *hi};
    }
    return std::nullopt;
}

Sampler uniform_sampler()
{
    return [](std::span<const SecurityIndex> members, std::size_t n, Rng& rng) {
        std::vector<SecurityIndex> picks(n);
        for (auto& p : picks) {
            p = members[rng.uniform_index(members.size())];
        }
        return picks;
    };
}

BootstrapPanel::BootstrapPanel(const MarketHistory& h, Transform t, std::optional<Date> start,
                               std::optional<Date> end)
    : history_(&h)
{
    if (h.num_days() < 2) {
        throw DataError("bootstrap needs a history of at least two days");
    }
    const auto first = start ? h.day_at_or_after(*start) : std::optional<DayIndex>{0};
    const auto last = end ? h.day_at_or_before(*end) : std::optional<DayIndex>{h.num_days() - 1};
    if (!first || !last || *first >= *last) {
        throw DataError("bootstrap horizon is not covered by the history");
    }
    first_ = *first;
    last_ = *last;

    fvalue_.resize(h.num_securities());
    for (SecurityIndex s = 0; s < h.num_securities(); ++s) {
        auto& fv = fvalue_[s];
        fv.resize(h.last_day(s) - h.first_day(s) + 1);
        for (DayIndex d = h.first_day(s); d <= h.last_day(s); ++d) {
            const double cap = h.market_cap(s, d);
            if (d >= first_ && d <= last_) {
                fv[d - h.first_day(s)] = transform_value(t, cap);
            } else {
                fv[d - h.first_day(s)] = 0.0;
            }
        }
    }

    replacements_.resize(last_ - first_ + 1);
    for (DayIndex d = first_ + 1; d <= last_; ++d) {
        auto& out = replacements_[d - first_];
        for (SecurityIndex s : h.members(d)) {
            if (h.listed(s, d - 1)) {
                out.push_back(s);
            }
        }
    }
}

void validate(const BootstrapConfig& cfg, const MarketHistory& h)
{
    if (cfg.iterations == 0) {
        throw DomainError("bootstrap needs at least one iteration");
    }
    if (!(cfg.initial_scale > 0.0)) {
        throw DomainError("bootstrap initial scale must be positive");
    }
    if (const auto* u = std::get_if<UniformN>(&cfg.n_mode)) {
        if (u->lo == 0 || u->lo > u->hi) {
            throw DomainError("uniform N range must satisfy 1 <= lo <= hi");
        }
    } else {
        const auto& f = std::get<FixedN>(cfg.n_mode);
        const auto first = cfg.start ? h.day_at_or_after(*cfg.start) : std::optional<DayIndex>{0};
        const std::size_t universe = first && *first < h.num_days() ? h.members(*first).size() : 0;
        if (f.n == 0 || f.n > universe) {
            throw DomainError("fixed N = " + std::to_string(f.n) + " must lie in [1, " + std::to_string(universe)
                              + "] (members on the first day)");
        }
    }
}

BootstrapDraw run_iteration(const BootstrapPanel& panel, const BootstrapConfig& cfg, std::size_t itr,
                            const Sampler& sampler)
{
    const MarketHistory& h = panel.history();
    Rng rng = iteration_rng(cfg.master_seed, itr);
    const std::size_t n = draw_portfolio_size(cfg.n_mode, rng);

    const auto universe = h.members(panel.first_day());
    if (universe.empty()) {
        throw DataError("no member securities on " + format_date(h.calendar()[panel.first_day()]));
    }
    std::vector<SecurityIndex> picks = sampler ? sampler(universe, n, rng) : uniform_sampler()(universe, n, rng);

    double growth = 1.0;
    for (DayIndex t = panel.first_day() + 1; t <= panel.last_day(); ++t) {
        const auto candidates = panel.replacements(t);
        double num = 0.0;
        double den = 0.0;
        for (auto& s : picks) {
            if (!h.is_member(s, t)) {
                if (candidates.empty()) {
                    throw DataError("no member securities to draw from on " + format_date(h.calendar()[t]));
                }
                s = candidates[rng.uniform_index(candidates.size())];
            }
            const double w = panel.weight(s, t - 1);
            num += w * h.total_return(s, t);
            den += w;
        }
        growth *= 1.0 + num / den;
    }
    return {itr, cfg.initial_scale * growth};
}

BootstrapDraw run_iteration(const MarketHistory& h, const BootstrapConfig& cfg, std::size_t itr,
                            const Sampler& sampler)
{
    validate(cfg, h);
    const BootstrapPanel panel(h, cfg.transform, cfg.start, cfg.end);
    return run_iteration(panel, cfg, itr, sampler);
}

std::vector<BootstrapDraw> run_bootstrap_serial(const MarketHistory& h, const BootstrapConfig& cfg,
                                                const Sampler& sampler)
{
    validate(cfg, h);
    const BootstrapPanel panel(h, cfg.transform, cfg.start, cfg.end);
    std::vector<BootstrapDraw> draws;
    draws.reserve(cfg.iterations);
    for (std::size_t i = 0; i < cfg.iterations; ++i) {
        try {
            draws.push_back(run_iteration(panel, cfg, i, sampler));
        } catch (const std::exception& e) {
            throw BootstrapError(i, e.what());
        }
    }
    return draws;
}

std::vector<BootstrapDraw> run_bootstrap(const MarketHistory& h, const BootstrapConfig& cfg, int workers,
                                         const Sampler& sampler)
{
    validate(cfg, h);
    const BootstrapPanel panel(h, cfg.transform, cfg.start, cfg.end);
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    const auto count = static_cast<std::int64_t>(cfg.iterations);

    std::vector<BootstrapDraw> draws(cfg.iterations);
    std::size_t failed_at = std::numeric_limits<std::size_t>::max();
    std::string failure;

#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto itr = static_cast<std::size_t>(i);
        try {
            draws[itr] = run_iteration(panel, cfg, itr, sampler);
        } catch (const std::exception& e) {
#pragma omp critical(ladderfolio_bootstrap_failure)
            if (itr < failed_at) {
                failed_at = itr;
                failure = e.what();
            }
        }
    }
    if (failed_at != std::numeric_limits<std::size_t>::max()) {
        throw BootstrapError(failed_at, failure);
    }
    return draws;
}

BootstrapSummary summarize(std::span<const BootstrapDraw> draws)
{
    if (draws.empty()) {
        throw DomainError("cannot summarize an empty set of draws");
    }
    std::vector<double> v;
    v.reserve(draws.size());
    for (const auto& d : draws) {
        v.push_back(d.cumulative_return);
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();

    BootstrapSummary s;
    s.iterations = n;
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    s.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - s.mean) * (x - s.mean);
    }
    s.sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);

    auto quantile = [&](double p) {
        const double k = std::ceil(p * static_cast<double>(n) - 1e-9);
        const auto idx = static_cast<std::size_t>(std::clamp(k, 1.0, static_cast<double>(n))) - 1;
        return v[idx];
    };
    s.q1 = quantile(0.01);
    s.q5 = quantile(0.05);
    s.q95 = quantile(0.95);
    s.q99 = quantile(0.99);
    return s;
}

}  // namespace ladderfolio
