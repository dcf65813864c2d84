#include "share_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace ladderfolio::testing {

namespace {

using DayRecords = std::map<std::string, SecurityDay>;

int period_of(Frequency f, Date d)
{
    const int y = static_cast<int>(d.year());
    const int m = static_cast<int>(static_cast<unsigned>(d.month()));
    switch (f) {
    case Frequency::Daily: return 0;
    case Frequency::Monthly: return y * 100 + m;
    case Frequency::Quarterly: return y * 10 + (m + 2) / 3;
    case Frequency::Annual: return y;
    }
    return 0;
}

double admin_in(Month m, const FeeSchedule& fees, const CpiSeries* cpi)
{
    if (cpi == nullptr) {
        return fees.admin_fee_2015;
    }
    return fees.admin_fee_2015 * cpi->level(m) / cpi->level(Month{std::chrono::year{2015}, std::chrono::December});
}

}  // namespace

double oracle_transform(Transform t, double x)
{
    switch (t) {
    case Transform::InvSquare: return 1.0 / (x * x);
    case Transform::Inv: return 1.0 / x;
    case Transform::InvSqrt: return 1.0 / std::sqrt(x);
    case Transform::Log: return std::log(x);
    case Transform::Sqrt: return std::sqrt(x);
    case Transform::Identity: return x;
    case Transform::Square: return x * x;
    case Transform::Equal: return 1.0;
    }
    return 0.0;
}

OracleRun simulate_shares(const MarketHistory& h, const BacktestConfig& cfg, const CpiSeries* cpi)
{
    std::map<Date, DayRecords> by_date;
    for (const auto& r : h.records()) {
        if (r.date >= cfg.start_date && r.date <= cfg.end_date) {
            by_date[r.date][r.security_id] = r;
        }
    }
    std::vector<Date> days;
    for (const auto& [d, recs] : by_date) {
        days.push_back(d);
    }

    const FeeSchedule& fees = cfg.policy.fees;
    const double hs = fees.spread_rate / 2.0;
    std::map<std::string, double> shares;
    double cash = cfg.initial_capital;
    OracleRun out;

    for (std::size_t k = 0; k < days.size(); ++k) {
        const DayRecords& today = by_date[days[k]];
        const DayRecords* tomorrow = k + 1 < days.size() ? &by_date[days[k + 1]] : nullptr;
        const Month month{days[k].year(), days[k].month()};
        const double admin = admin_in(month, fees, cpi);
        double adm_paid = 0.0;
        double spr_paid = 0.0;

        double index_r = 0.0;
        if (k > 0) {
            const DayRecords& yesterday = by_date[days[k - 1]];
            double num = 0.0;
            double den = cash;
            for (const auto& [id, n] : shares) {
                const double prev = yesterday.at(id).close;
                const auto& rec = today.at(id);
                num += n * prev * ((rec.close + rec.dividend) / prev - 1.0);
                den += n * prev;
                cash += n * rec.dividend;
            }
            index_r = num / den;
        }
        auto value_now = [&] {
            double v = cash;
            for (const auto& [id, n] : shares) {
                v += n * today.at(id).close;
            }
            return v;
        };
        const double gross = value_now();
        bool broke = false;

        if (tomorrow) {
            for (auto it = shares.begin(); it != shares.end();) {
                if (tomorrow->count(it->first)) {
                    ++it;
                    continue;
                }
                const double v = it->second * today.at(it->first).close;
                const double spread = v * hs;
                cash += v - admin - spread;
                adm_paid += admin;
                spr_paid += spread;
                it = shares.erase(it);
            }
            broke = value_now() <= 0.0;
        }

        const bool rebalance = k == 0 || period_of(cfg.policy.frequency, days[k]) != period_of(cfg.policy.frequency, days[k - 1])
                               || cfg.policy.frequency == Frequency::Daily;
        if (!broke && rebalance) {
            std::map<std::string, double> w;
            double total = 0.0;
            for (const auto& [id, rec] : today) {
                if (!rec.is_member || (tomorrow && !tomorrow->count(id))) {
                    continue;
                }
                const double f = oracle_transform(cfg.transform, rec.close * rec.shares_outstanding);
                w[id] = f;
                total += f;
            }
            for (auto& [id, x] : w) {
                x /= total;
            }

            const double value = value_now();
            std::set<std::string> names;
            for (const auto& [id, n] : shares) names.insert(id);
            for (const auto& [id, x] : w) names.insert(id);

            // Legs whose trade is dust are left alone.
            std::map<std::string, std::pair<double, double>> legs;  // id -> (weight, held value)
            double budget = cash;
            for (const auto& id : names) {
                const double held = shares.count(id) ? shares[id] * today.at(id).close : 0.0;
                const double weight = w.count(id) ? w[id] : 0.0;
                if ((weight == 0.0 && held > 0.0) || std::abs(weight * value - held) > 1e-9 * value) {
                    legs[id] = {weight, held};
                    budget += held;
                }
            }
            if (!legs.empty()) {
                const double admin_total = admin * static_cast<double>(legs.size());
                auto cost = [&](double x) {
                    double c = admin_total;
                    for (const auto& [id, leg] : legs) {
                        c += leg.first * x + hs * std::abs(leg.first * x - leg.second);
                    }
                    return c;
                };
                double wsum = 0.0;
                for (const auto& [id, leg] : legs) wsum += leg.first;

                if (cost(0.0) > budget) {
                    broke = true;
                    adm_paid += admin_total;
                } else {
                    double x = 0.0;
                    if (wsum > 0.0) {
                        double lo = 0.0;
                        double hi = budget / wsum;
                        for (int it = 0; it < 200; ++it) {
                            const double mid = 0.5 * (lo + hi);
                            (cost(mid) > budget ? hi : lo) = mid;
                        }
                        x = 0.5 * (lo + hi);
                    }
                    double spent = admin_total;
                    for (const auto& [id, leg] : legs) {
                        const double target = leg.first * x;
                        spent += hs * std::abs(target - leg.second);
                        if (leg.first > 0.0) {
                            shares[id] = target / today.at(id).close;
                        } else {
                            shares.erase(id);
                        }
                    }
                    adm_paid += admin_total;
                    spr_paid += spent - admin_total;
                    cash = wsum > 0.0 ? 0.0 : budget - spent;
                }
            }
        }

        double value = value_now();
        if (broke) {
            value = 0.0;
            shares.clear();
            cash = 0.0;
            // Everything left is consumed, admin first.
            adm_paid = std::min(adm_paid, std::max(gross, 0.0));
            spr_paid = std::max(gross, 0.0) - adm_paid;
        }
        out.dates.push_back(days[k]);
        out.values.push_back(value);
        out.index_returns.push_back(index_r);
        out.admin.push_back(adm_paid);
        out.spread.push_back(spr_paid);
        if (broke) {
            out.bankrupt = true;
            break;
        }
    }
    return out;
}

}  // namespace ladderfolio::testing
