#include "ladderfolio/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ladderfolio/errors.hpp"
#include "ladderfolio/random.hpp"

namespace ladderfolio {

namespace {

struct ActiveSecurity {
    std::string id;
    double price = 0.0;
    double shares = 0.0;
    double drift = 0.0;
    double volatility = 0.0;
    double dividend_yield = 0.0;
    bool fresh = true;  // no record yet, so no return and no dividend
};

std::string make_id(std::size_t serial)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "S%05zu", serial);
    return buf;
}

void check_interval(const Interval& r, const char* name)
{
    if (!(r.lo >= 0.0) || !(r.hi >= r.lo) || !std::isfinite(r.hi)) {
        throw UsageError(std::string("synthetic ") + name + " range must satisfy 0 <= lo <= hi");
    }
}

bool is_dividend_month(Date d)
{
    const unsigned m = static_cast<unsigned>(d.month());
    return m % 3 == 0;
}

}  // namespace

void validate(const SynthConfig& cfg)
{
    if (cfg.n_securities == 0) {
        throw UsageError("synthetic history needs at least one security");
    }
    if (cfg.n_years == 0) {
        throw UsageError("synthetic history needs at least one year");
    }
    check_interval(cfg.drift, "drift");
    check_interval(cfg.volatility, "volatility");
    check_interval(cfg.dividend_yield, "dividend yield");
    if (!(cfg.membership_churn_rate >= 0.0)) {
        throw UsageError("membership churn rate must be nonnegative");
    }
    if (!(cfg.initial_cap.lo > 1.0) || !(cfg.initial_cap.hi >= cfg.initial_cap.lo)) {
        throw UsageError("initial cap range must satisfy 1 < lo <= hi");
    }
    if (!cfg.start.ok()) {
        throw UsageError("synthetic start date is invalid");
    }
}

std::vector<Date> synthetic_calendar(Date start, std::size_t n_years)
{
    using namespace std::chrono;
    std::vector<Date> out;
    out.reserve(n_years * 252);
    Month month = month_of(start);
    for (std::size_t i = 0; i < n_years * 12; ++i, month += months{1}) {
        std::size_t taken = 0;
        const auto month_end = (month / std::chrono::last).day();
        for (unsigned dd = 1; dd <= static_cast<unsigned>(month_end) && taken < kTradingDaysPerMonth; ++dd) {
            const Date d = month / day{dd};
            if (sys_days{d} < sys_days{start} || !is_weekday(d)) {
                continue;
            }
            out.push_back(d);
            ++taken;
        }
    }
    return out;
}

MarketHistory generate_synthetic(const SynthConfig& cfg)
{
    validate(cfg);
    Rng rng(cfg.seed);
    const std::vector<Date> calendar = synthetic_calendar(cfg.start, cfg.n_years);

    std::size_t serial = 0;
    const double log_cap_lo = std::log(cfg.initial_cap.lo);
    const double log_cap_hi = std::log(cfg.initial_cap.hi);

    auto draw_security = [&](double cap) {
        ActiveSecurity sec;
        sec.id = make_id(serial++);
        sec.price = rng.uniform(20.0, 100.0);
        sec.shares = std::max(1.0, std::round(cap / sec.price));
        sec.drift = rng.uniform(cfg.drift.lo, cfg.drift.hi);
        sec.volatility = rng.uniform(cfg.volatility.lo, cfg.volatility.hi);
        sec.dividend_yield = rng.uniform(cfg.dividend_yield.lo, cfg.dividend_yield.hi);
        return sec;
    };

    std::vector<ActiveSecurity> active;
    active.reserve(cfg.n_securities);
    for (std::size_t i = 0; i < cfg.n_securities; ++i) {
        const double cap = std::exp(rng.uniform(log_cap_lo, log_cap_hi));
        active.push_back(draw_security(cap));
    }
    if (cfg.small_caps_drift_higher) {
        std::vector<double> drifts;
        for (const auto& sec : active) {
            drifts.push_back(sec.drift);
        }
        std::sort(drifts.begin(), drifts.end(), std::greater<>());
        std::vector<std::size_t> by_cap(active.size());
        std::iota(by_cap.begin(), by_cap.end(), std::size_t{0});
        std::stable_sort(by_cap.begin(), by_cap.end(), [&](std::size_t a, std::size_t b) {
            return active[a].price * active[a].shares < active[b].price * active[b].shares;
        });
        for (std::size_t rank = 0; rank < by_cap.size(); ++rank) {
            active[by_cap[rank]].drift = drifts[rank];
        }
    }

    std::vector<SecurityDay> records;
    records.reserve(calendar.size() * cfg.n_securities);
    std::vector<std::size_t> slots(cfg.n_securities);

    for (std::size_t d = 0; d < calendar.size(); ++d) {
        const Date date = calendar[d];
        const bool month_start = d > 0 && month_of(calendar[d - 1]) != month_of(date);

        if (month_start && cfg.membership_churn_rate > 0.0) {
            const std::size_t k =
                std::min<std::size_t>(rng.poisson(cfg.membership_churn_rate / 12.0), cfg.n_securities);
            std::iota(slots.begin(), slots.end(), std::size_t{0});
            for (std::size_t j = 0; j < k; ++j) {
                const std::size_t pick = j + rng.uniform_index(cfg.n_securities - j);
                std::swap(slots[j], slots[pick]);
                const double cap = std::exp(rng.uniform(log_cap_lo, log_cap_hi));
                active[slots[j]] = draw_security(cap);
            }
        }

        for (auto& sec : active) {
            double dividend = 0.0;
            if (d > 0 && !sec.fresh) {
                const double dt = 1.0 / kTradingDaysPerYear;
                const double z = rng.normal();
                const double prev = sec.price;
                sec.price = prev
                            * std::exp((sec.drift - 0.5 * sec.volatility * sec.volatility) * dt
                                       + sec.volatility * std::sqrt(dt) * z);
                if (month_start && is_dividend_month(date)) {
                    dividend = sec.dividend_yield / 4.0 * prev;
                }
            }
            sec.fresh = false;
            records.push_back({sec.id, date, sec.price, sec.shares, dividend, true});
        }
    }
    return MarketHistory(std::move(records));
}

}  // namespace ladderfolio
