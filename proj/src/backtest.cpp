#include "ladderfolio/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ladderfolio/errors.hpp"

namespace ladderfolio {

namespace {

struct Position {
    SecurityIndex security;
    double shares;
};

// Positions sorted by security index.
struct Book {
    std::vector<Position> positions;
    double cash = 0.0;

    double value(const MarketHistory& h, DayIndex d) const
    {
        double v = cash;
        for (const auto& p : positions) {
            v += p.shares * h.close(p.security, d);
        }
        return v;
    }
};

struct Target {
    SecurityIndex security;
    double weight;
};

struct Leg {
    SecurityIndex security;
    double close;
    double held_value;
    double weight;
};

struct BookRebalance {
    FeeRecord fees;
    bool bankrupt = false;
};

// Solves sum_T w_i x + admin_total + hs * sum_T |w_i x - a_i| = budget for x.
// The left side is piecewise linear and strictly increasing when sum w > 0.
// Returns nullopt when even x = 0 leaves the fees unpaid.
std::optional<double> solve_invested_value(std::span<const Leg> legs, double budget, double admin_total,
                                           double half_spread)
{
    double weight_sum = 0.0;
    double sold_value = 0.0;  // legs with zero target weight
    std::vector<const Leg*> sorted;
    sorted.reserve(legs.size());
    for (const auto& leg : legs) {
        if (leg.weight > 0.0) {
            weight_sum += leg.weight;
            sorted.push_back(&leg);
        } else {
            sold_value += leg.held_value;
        }
    }
    double right_w = weight_sum;
    double right_a = 0.0;
    for (const Leg* leg : sorted) {
        right_a += leg->held_value;
    }
    const double base = admin_total - budget + half_spread * sold_value;
    if (base + half_spread * right_a > 0.0) {
        return std::nullopt;
    }
    std::sort(sorted.begin(), sorted.end(), [](const Leg* a, const Leg* b) {
        return a->held_value * b->weight < b->held_value * a->weight;
    });

    double left_w = 0.0;
    double left_a = 0.0;
    for (const Leg* leg : sorted) {
        const double x = leg->held_value / leg->weight;
        const double g = weight_sum * x + base + half_spread * ((left_w * x - left_a) + (right_a - right_w * x));
        if (g >= 0.0) {
            break;
        }
        left_w += leg->weight;
        left_a += leg->held_value;
        right_w -= leg->weight;
        right_a -= leg->held_value;
    }
    const double slope = weight_sum + half_spread * (left_w - right_w);
    const double intercept = base + half_spread * (right_a - left_a);
    return std::max(0.0, -intercept / slope);
}

BookRebalance rebalance_book(const MarketHistory& h, DayIndex day, Book& book, std::span<const Target> targets,
                             double admin_per_trade, double spread_rate)
{
    const double value = book.value(h, day);
    if (!(value > 0.0)) {
        return {{}, true};
    }

    std::vector<Leg> legs;
    legs.reserve(book.positions.size() + targets.size());
    {
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < book.positions.size() || j < targets.size()) {
            SecurityIndex s;
            double shares = 0.0;
            double weight = 0.0;
            if (j == targets.size()
                || (i < book.positions.size() && book.positions[i].security < targets[j].security)) {
                s = book.positions[i].security;
                shares = book.positions[i++].shares;
            } else if (i == book.positions.size() || targets[j].security < book.positions[i].security) {
                s = targets[j].security;
                weight = targets[j++].weight;
            } else {
                s = targets[j].security;
                shares = book.positions[i++].shares;
                weight = targets[j++].weight;
            }
            const double close = h.close(s, day);
            legs.push_back({s, close, shares * close, weight});
        }
    }

    std::vector<Leg> traded;
    std::vector<Position> untouched;
    double budget = book.cash;
    for (const auto& leg : legs) {
        const bool sell_out = leg.weight == 0.0 && leg.held_value > 0.0;
        if (sell_out || std::abs(leg.weight * value - leg.held_value) > kDustFraction * value) {
            traded.push_back(leg);
            budget += leg.held_value;
        } else if (leg.held_value > 0.0) {
            untouched.push_back({leg.security, leg.held_value / leg.close});
        }
    }
    if (traded.empty()) {
        return {};
    }

    const double half_spread = 0.5 * spread_rate;
    const double admin_total = admin_per_trade * static_cast<double>(traded.size());
    const auto invested = solve_invested_value(traded, budget, admin_total, half_spread);
    if (!invested) {
        // The admin charges that could not be paid; the caller caps them.
        return {{admin_total, 0.0, traded.size()}, true};
    }

    BookRebalance out;
    out.fees.admin = admin_total;
    out.fees.trades = traded.size();
    double weight_sum = 0.0;
    std::vector<Position> next = std::move(untouched);
    for (const auto& leg : traded) {
        const double new_value = leg.weight * *invested;
        out.fees.spread += half_spread * std::abs(new_value - leg.held_value);
        weight_sum += leg.weight;
        if (leg.weight > 0.0) {
            next.push_back({leg.security, new_value / leg.close});
        }
    }
    std::sort(next.begin(), next.end(),
              [](const Position& a, const Position& b) { return a.security < b.security; });
    book.positions = std::move(next);
    // Only sells: whatever the fees leave stays in cash. Otherwise fully invested.
    book.cash = weight_sum > 0.0 ? 0.0 : budget - out.fees.total();
    return out;
}

int period_key(Frequency f, Date d)
{
    const int y = year_of(d);
    const int m = static_cast<int>(static_cast<unsigned>(d.month()));
    switch (f) {
    case Frequency::Daily: return 0;
    case Frequency::Monthly: return y * 12 + (m - 1);
    case Frequency::Quarterly: return y * 4 + (m - 1) / 3;
    case Frequency::Annual: return y;
    }
    return 0;
}

PortfolioState snapshot(const MarketHistory& h, DayIndex day, const Book& book, double value)
{
    PortfolioState st;
    st.date = h.calendar()[day];
    st.value = value;
    st.cash = book.cash;
    for (const auto& p : book.positions) {
        st.holdings.emplace(h.security_id(p.security), p.shares);
    }
    return st;
}

BacktestReport simulate(const MarketHistory& h, const CpiSeries* cpi, const BacktestConfig& cfg,
                        const DayObserver& observer)
{
    if (!(cfg.initial_capital > 0.0)) {
        throw DomainError("initial capital must be positive");
    }
    if (!(std::chrono::sys_days{cfg.start_date} < std::chrono::sys_days{cfg.end_date})) {
        throw DomainError("backtest start date must precede end date");
    }
    if (cfg.policy.fees.admin_fee_2015 < 0.0 || cfg.policy.fees.spread_rate < 0.0) {
        throw DomainError("fees must be nonnegative");
    }
    const auto first = h.day_at_or_after(cfg.start_date);
    const auto last = h.day_at_or_before(cfg.end_date);
    if (!first || !last || *first >= *last) {
        throw DataError("history does not cover " + format_date(cfg.start_date) + " to "
                        + format_date(cfg.end_date));
    }
    if (h.members(*first).empty()) {
        throw DataError("no member securities on " + format_date(h.calendar()[*first]));
    }

    BacktestReport report;
    report.config = cfg;
    report.initial_capital = cfg.initial_capital;

    const auto& fees = cfg.policy.fees;
    const auto calendar = h.calendar();
    Book book;
    book.cash = cfg.initial_capital;
    double prev_value = cfg.initial_capital;

    std::vector<double> weights;
    std::vector<double> returns;
    std::vector<double> caps;
    std::vector<Target> targets;

    for (DayIndex k = *first; k <= *last; ++k) {
        const Date date = calendar[k];
        const Month month = month_of(date);
        double day_return = 0.0;

        if (k > *first) {
            weights.clear();
            returns.clear();
            double dividends = 0.0;
            for (const auto& p : book.positions) {
                weights.push_back(p.shares * h.close(p.security, k - 1));
                returns.push_back(h.total_return(p.security, k));
                dividends += p.shares * h.dividend(p.security, k);
            }
            weights.push_back(book.cash);
            returns.push_back(0.0);
            day_return = index_return(weights, returns);
            book.cash += dividends;
        }

        const double value_before_fees = book.value(h, k);
        const double admin_per_trade = admin_fee(fees, month, cpi);
        FeeRecord today;
        bool broke = false;

        // Securities whose listing ends today are sold at this close.
        if (k < *last) {
            std::vector<Position> kept;
            for (const auto& p : book.positions) {
                if (h.listed(p.security, k + 1)) {
                    kept.push_back(p);
                    continue;
                }
                const double close = h.close(p.security, k);
                const FeeRecord f = trade_fee(p.shares, close, month, fees, cpi);
                book.cash += p.shares * close - f.total();
                today += f;
            }
            book.positions = std::move(kept);
            broke = !(book.value(h, k) > 0.0);
        }

        const bool rebalance_day =
            k == *first || period_key(cfg.policy.frequency, date) != period_key(cfg.policy.frequency, calendar[k - 1])
            || cfg.policy.frequency == Frequency::Daily;
        if (!broke && rebalance_day) {
            targets.clear();
            caps.clear();
            for (SecurityIndex s : h.members(k)) {
                if (k < *last && !h.listed(s, k + 1)) {
                    continue;
                }
                targets.push_back({s, 0.0});
                caps.push_back(h.market_cap(s, k));
            }
            if (!targets.empty()) {
                std::vector<double> w(caps.size());
                if (cfg.transform == Transform::Log || cfg.transform == Transform::Equal) {
                    w = normalized_weights(cfg.transform, caps);
                } else {
                    normalized_weights_unchecked(cfg.transform, caps, w);
                }
                for (std::size_t i = 0; i < targets.size(); ++i) {
                    targets[i].weight = w[i];
                }
                const auto r = rebalance_book(h, k, book, targets, admin_per_trade, fees.spread_rate);
                today += r.fees;
                broke = r.bankrupt;
            }
        }

        double value = book.value(h, k);
        if (broke) {
            // The whole remaining value is consumed; record it as fees so the
            // ledger still reconciles, admin first.
            today.admin = std::min(today.admin, std::max(value_before_fees, 0.0));
            today.spread = std::max(value_before_fees, 0.0) - today.admin;
            value = 0.0;
            book.positions.clear();
            book.cash = 0.0;
        }

        report.dates.push_back(date);
        report.values.push_back(value);
        report.daily_returns.push_back(day_return);
        report.daily_fees.push_back(today);
        report.fee_ledger.admin_total += today.admin;
        report.fee_ledger.spread_total += today.spread;
        prev_value = value;

        if (observer) {
            observer(snapshot(h, k, book, value));
        }
        if (broke) {
            report.bankrupt = true;
            report.bankruptcy_date = date;
            break;
        }
    }

    report.fee_ledger.total = report.fee_ledger.admin_total + report.fee_ledger.spread_total;
    report.final_value = prev_value;
    report.monthly_returns = monthly_report_returns(report);
    report.annual_returns = annualize_report(report);
    return report;
}

template <typename Key, typename KeyFn>
std::vector<std::pair<Key, double>> bucket_returns(const BacktestReport& report, KeyFn key_of)
{
    std::vector<std::pair<Key, double>> out;
    double base = report.initial_capital;
    for (std::size_t i = 0; i < report.dates.size(); ++i) {
        const bool bucket_end = i + 1 == report.dates.size() || key_of(report.dates[i + 1]) != key_of(report.dates[i]);
        if (!bucket_end) {
            continue;
        }
        const double v = report.values[i];
        out.emplace_back(key_of(report.dates[i]), base > 0.0 ? v / base - 1.0 : 0.0);
        base = v;
    }
    return out;
}

}  // namespace

std::string_view to_string(Frequency f)
{
    switch (f) {
    case Frequency::Daily: return "daily";
    case Frequency::Monthly: return "monthly";
    case Frequency::Quarterly: return "quarterly";
    case Frequency::Annual: return "annual";
    }
    return "?";
}

std::optional<Frequency> parse_frequency(std::string_view text)
{
    for (Frequency f : {Frequency::Daily, Frequency::Monthly, Frequency::Quarterly, Frequency::Annual}) {
        if (to_string(f) == text) {
            return f;
        }
    }
    return std::nullopt;
}

double admin_fee(const FeeSchedule& fees, Month month, const CpiSeries* cpi)
{
    if (cpi == nullptr || fees.admin_fee_2015 == 0.0) {
        return fees.admin_fee_2015;
    }
    return deflate(fees.admin_fee_2015, month, *cpi);
}

FeeRecord trade_fee(double delta_shares, double close, Month month, const FeeSchedule& fees, const CpiSeries* cpi)
{
    FeeRecord f;
    if (delta_shares == 0.0) {
        return f;
    }
    f.admin = admin_fee(fees, month, cpi);
    f.spread = std::abs(delta_shares) * close * fees.spread_rate / 2.0;
    f.trades = 1;
    return f;
}

double index_return(std::span<const double> weights, std::span<const double> returns)
{
    if (weights.size() != returns.size()) {
        throw DomainError("index_return: weights and returns differ in length");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        num += weights[i] * returns[i];
        den += weights[i];
    }
    if (den == 0.0) {
        throw DomainError("index_return: weights sum to zero");
    }
    return num / den;
}

double index_return(const std::map<std::string, double, std::less<>>& weights,
                    const std::map<std::string, double, std::less<>>& returns)
{
    if (weights.size() != returns.size()) {
        throw DomainError("index_return: weight and return supports differ");
    }
    std::vector<double> w;
    std::vector<double> r;
    auto it = returns.begin();
    for (const auto& [id, weight] : weights) {
        if (it->first != id) {
            throw DomainError("index_return: no return for security '" + id + "'");
        }
        w.push_back(weight);
        r.push_back(it->second);
        ++it;
    }
    return index_return(w, r);
}

RebalanceOutcome rebalance(const MarketHistory& h, const PortfolioState& state, const TargetWeights& targets,
                           const FeeSchedule& fees, const CpiSeries* cpi)
{
    const auto day = h.day_index(state.date);
    if (!day) {
        throw LookupError("no trading day " + format_date(state.date));
    }
    auto resolve = [&](const std::string& id) {
        const auto s = h.find_security(id);
        if (!s || !h.listed(*s, *day)) {
            throw LookupError("no record for security '" + id + "' on " + format_date(state.date));
        }
        return *s;
    };
    Book book;
    book.cash = state.cash;
    for (const auto& [id, shares] : state.holdings) {
        if (shares > 0.0) {
            book.positions.push_back({resolve(id), shares});
        }
    }
    std::sort(book.positions.begin(), book.positions.end(),
              [](const Position& a, const Position& b) { return a.security < b.security; });
    std::vector<Target> tv;
    for (const auto& [id, w] : targets) {
        if (w < 0.0) {
            throw DomainError("negative target weight for security '" + id + "'");
        }
        tv.push_back({resolve(id), w});
    }
    std::sort(tv.begin(), tv.end(), [](const Target& a, const Target& b) { return a.security < b.security; });

    const auto r = rebalance_book(h, *day, book, tv, admin_fee(fees, month_of(state.date), cpi), fees.spread_rate);
    RebalanceOutcome out;
    out.fees = r.fees;
    out.bankrupt = r.bankrupt;
    if (r.bankrupt) {
        out.state.date = state.date;
        return out;
    }
    out.state = snapshot(h, *day, book, book.value(h, *day));
    return out;
}

BacktestReport run_backtest(const MarketHistory& h, const CpiSeries& cpi, const BacktestConfig& cfg,
                            const DayObserver& observer)
{
    return simulate(h, &cpi, cfg, observer);
}

BacktestReport run_backtest(const MarketHistory& h, const BacktestConfig& cfg, const DayObserver& observer)
{
    return simulate(h, nullptr, cfg, observer);
}

std::vector<std::pair<int, double>> annualize_report(const BacktestReport& report)
{
    return bucket_returns<int>(report, [](Date d) { return year_of(d); });
}

std::vector<std::pair<Month, double>> monthly_report_returns(const BacktestReport& report)
{
    return bucket_returns<Month>(report, [](Date d) { return month_of(d); });
}

}  // namespace ladderfolio
