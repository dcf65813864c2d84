// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: ladderfolio_acceptance <path to ladderfolio executable>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "ladderfolio/backtest.hpp"
#include "ladderfolio/bootstrap.hpp"
#include "ladderfolio/metrics.hpp"
#include "ladderfolio/report_io.hpp"
#include "ladderfolio/synthetic.hpp"
#include "ladderfolio/weighting.hpp"
#include "published_returns.hpp"
#include "share_simulator.hpp"

using namespace ladderfolio;
using ladderfolio::testing::RecordBuilder;
using ladderfolio::testing::static_config;
using ladderfolio::testing::ymd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v, int digits = 6)
{
    std::ostringstream o;
    o.precision(digits);
    o << v;
    return o.str();
}

bool rel_close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

BacktestConfig span_of(const MarketHistory& h, Transform t, Frequency f, FeeSchedule fees)
{
    BacktestConfig cfg;
    cfg.transform = t;
    cfg.policy = {f, fees};
    cfg.start_date = h.calendar().front();
    cfg.end_date = h.calendar().back();
    return cfg;
}

Outcome two_stock_weighting()
{
    const auto w = target_weights(Transform::InvSquare, {{"A", 0.4}, {"B", 0.6}});
    const bool ok = std::abs(w.at("A") - 0.69231) <= 1e-5 && std::abs(w.at("B") - 0.30769) <= 1e-5;
    return {ok, "weights (" + num(w.at("A")) + ", " + num(w.at("B")) + ")"};
}

Outcome fee_arithmetic()
{
    const CpiSeries cpi = testing::linear_cpi();
    const FeeSchedule fees{1.0, 0.001};
    const auto anchor = trade_fee(50.0, 100.0, kCpiAnchor, fees, &cpi);
    const Month jan58{std::chrono::year{1958}, std::chrono::January};
    const double admin58 = admin_fee(fees, jan58, &cpi);
    const bool ok = std::abs(anchor.total() - 3.5) <= 1e-12 && std::abs(admin58 - 0.121) <= 0.001;
    return {ok, "2015 trade $" + format_fixed(anchor.total(), 2) + ", 1958-01 admin $" + format_fixed(admin58, 4)};
}

Outcome sharpe_cross_check()
{
    struct Row {
        const char* name;
        const std::array<double, 58>* pct;
        double mean, sd, sharpe;
    };
    const Row rows[] = {
        {"EQU", &testing::kEqualAnnualPct, 15.03, 19.30, 68.81},
        {"1/x", &testing::kInvAnnualPct, 20.35, 26.44, 70.35},
    };
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        ReturnSeries s;
        for (double p : *r.pct) s.values.push_back(p / 100.0);
        const auto [m, sd] = mean_sd(s);
        const double sh = sharpe(s, RiskParams{});
        ok = ok && std::abs(100 * m - r.mean) <= 0.02 && std::abs(100 * sd - r.sd) <= 0.02
             && std::abs(100 * sh - r.sharpe) <= 0.1;
        detail += std::string(detail.empty() ? "" : "; ") + r.name + " " + format_fixed(100 * m, 2) + "/"
                  + format_fixed(100 * sd, 2) + "/" + format_fixed(100 * sh, 2);
    }
    return {ok, detail};
}

Outcome cagr_cross_check()
{
    const double g = cagr(1e5, 1.477e9, 58);
    return {std::abs(100 * g - 18.0) <= 0.05, "cagr " + format_fixed(100 * g, 3) + "%"};
}

Outcome oracle_equivalence()
{
    const auto h = generate_synthetic(static_config(10, 2, 20150101, true));
    const CpiSeries cpi = testing::linear_cpi();
    const auto cfg = span_of(h, Transform::Equal, Frequency::Monthly, FeeSchedule{});
    const auto report = run_backtest(h, cpi, cfg);
    const auto oracle = testing::simulate_shares(h, cfg, &cpi);
    const double a = report.final_value;
    const double b = oracle.values.back();
    return {rel_close(a, b, 1e-8) && !report.bankrupt,
            "engine " + format_fixed(a, 6) + " vs oracle " + format_fixed(b, 6) + ", rel diff "
                + num(std::abs(a - b) / b, 3)};
}

Outcome fee_free_compounding()
{
    const auto h = generate_synthetic(static_config(12, 2, 606, true));
    bool ok = true;
    double worst = 0.0;
    for (Transform t : kAllTransforms) {
        const auto report = run_backtest(h, span_of(h, t, Frequency::Monthly, kNoFees));
        double growth = report.initial_capital;
        for (double r : report.daily_returns) growth *= 1.0 + r;
        worst = std::max(worst, std::abs(report.final_value - growth) / growth);
        ok = ok && rel_close(report.final_value, growth, 1e-8);
    }
    return {ok, "8 transforms, worst rel diff " + num(worst, 3)};
}

Outcome cap_weight_self_financing()
{
    const auto h = generate_synthetic(static_config(15, 3, 77));
    const double monthly = run_backtest(h, span_of(h, Transform::Identity, Frequency::Monthly, kNoFees)).final_value;
    const double annual = run_backtest(h, span_of(h, Transform::Identity, Frequency::Annual, kNoFees)).final_value;
    return {rel_close(monthly, annual, 1e-8),
            "monthly " + format_fixed(monthly, 6) + " vs annual " + format_fixed(annual, 6)};
}

Outcome bootstrap_exhaustive()
{
    // Three members with distinct one-day returns; a draw is an ordered pair.
    const double r[3] = {0.01, 0.02, 0.04};
    RecordBuilder b;
    const char* ids[3] = {"A", "B", "C"};
    for (int i = 0; i < 3; ++i) {
        b.add(ids[i], ymd(2020, 1, 2), 10.0).add(ids[i], ymd(2020, 1, 3), 10.0 * (1.0 + r[i]));
    }
    const auto h = b.build();
    BootstrapConfig cfg;
    cfg.n_mode = FixedN{2};
    cfg.iterations = 10000;
    cfg.master_seed = 8;
    cfg.initial_scale = 1.0;
    const auto draws = run_bootstrap(h, cfg);

    // Enumerate the 9 ordered outcomes; equal-weight CR only sees the multiset.
    std::map<long long, double> expected;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            expected[std::llround(1e9 * (1.0 + 0.5 * (r[i] + r[j])))] += 1.0 / 9.0;
        }
    }
    std::map<long long, double> observed;
    for (const auto& d : draws) {
        const auto key = std::llround(1e9 * d.cumulative_return);
        if (!expected.count(key)) {
            return {false, "unexpected outcome " + num(d.cumulative_return, 12)};
        }
        observed[key] += 1.0;
    }
    double chi2 = 0.0;
    for (const auto& [key, p] : expected) {
        const double e = p * static_cast<double>(cfg.iterations);
        chi2 += (observed[key] - e) * (observed[key] - e) / e;
    }
    const double critical = 15.086;  // chi-square, 5 df, 1%
    return {chi2 < critical, std::to_string(expected.size()) + " distinct CR values from 9 outcomes, chi2 "
                                 + format_fixed(chi2, 3) + " < " + format_fixed(critical, 3)};
}

int shell(const std::string& command)
{
    return std::system((command + " > /dev/null 2>&1").c_str());
}

Outcome bootstrap_determinism(const std::string& cli)
{
    const auto dir = testing::scratch_dir("acceptance_9");
    const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
    if (shell(q(cli) + " synth --stocks 50 --years 5 --seed 9 --out " + q(dir)) != 0) {
        return {false, "synth failed"};
    }
    const auto run = [&](const char* workers) {
        return shell(q(cli) + " bootstrap --data " + q(dir / "prices.csv") + " --iterations 1000 --seed 123 --workers "
                     + workers + " --out " + q(dir / workers));
    };
    const auto t0 = std::chrono::steady_clock::now();
    if (run("1") != 0 || run("8") != 0) {
        return {false, "bootstrap failed"};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto a = testing::read_file(dir / "1" / "draws.csv");
    const auto b = testing::read_file(dir / "8" / "draws.csv");
    const bool same = !a.empty() && a == b;
    return {same && secs < 10.0, std::string(same ? "identical" : "different") + " draws.csv for --workers 1 and 8, "
                                     + format_fixed(secs, 2) + " s for both runs"};
}

Outcome risk_metric_properties()
{
    std::mt19937_64 rng(10);
    std::student_t_distribution<double> fat(3.0);
    std::size_t violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> v(1 + rng() % 500);
        for (double& x : v) x = 0.01 * fat(rng);
        const double var = value_at_risk(v, 0.05);
        // Sort oracle: k-th smallest with k = ceil(n / 20), integer arithmetic.
        std::vector<double> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t k = std::max<std::size_t>(1, (v.size() + 19) / 20);
        if (!(conditional_value_at_risk(v, 0.05) <= var) || var != sorted[k - 1]) ++violations;
    }
    return {violations == 0, std::to_string(violations) + " violations in 1000 series"};
}

Outcome ladder_order()
{
    SynthConfig cfg;
    cfg.n_securities = 20;
    cfg.n_years = 5;
    cfg.seed = 11;
    cfg.small_caps_drift_higher = true;
    cfg.volatility = {0.0, 0.0};
    cfg.dividend_yield = {0.0, 0.0};
    const auto h = generate_synthetic(cfg);
    std::vector<double> finals;
    std::string detail;
    for (Transform t : kLadder) {
        finals.push_back(run_backtest(h, span_of(h, t, Frequency::Monthly, FeeSchedule{})).final_value);
        detail += std::string(detail.empty() ? "" : " > ") + std::string(to_string(t)) + " "
                  + format_fixed(finals.back(), 0);
    }
    bool ok = true;
    for (std::size_t i = 1; i < finals.size(); ++i) ok = ok && finals[i - 1] > finals[i];
    return {ok, detail};
}

Outcome fee_drag()
{
    bool ordered = true;
    std::string detail;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        SynthConfig cfg;
        cfg.n_securities = 15;
        cfg.n_years = 2;
        cfg.seed = seed;
        cfg.membership_churn_rate = 3.0;
        const auto h = generate_synthetic(cfg);
        std::vector<double> admin;
        for (Frequency f : {Frequency::Annual, Frequency::Quarterly, Frequency::Monthly, Frequency::Daily}) {
            admin.push_back(run_backtest(h, span_of(h, Transform::InvSqrt, f, FeeSchedule{})).fee_ledger.admin_total);
        }
        ordered = ordered && std::is_sorted(admin.begin(), admin.end());
        if (seed == 1) {
            detail = "admin A/Q/M/D " + format_fixed(admin[0], 0) + "/" + format_fixed(admin[1], 0) + "/"
                     + format_fixed(admin[2], 0) + "/" + format_fixed(admin[3], 0);
        }
    }

    // Small caps, wide spreads, a small account.
    SynthConfig small;
    small.n_securities = 20;
    small.n_years = 1;
    small.seed = 12;
    small.initial_cap = {1e6, 1e8};
    small.volatility = {0.6, 0.9};
    const auto h = generate_synthetic(small);
    const FeeSchedule wide{1.0, 0.02};
    auto daily_cfg = span_of(h, Transform::InvSquare, Frequency::Daily, wide);
    daily_cfg.initial_capital = 2000.0;
    auto monthly_cfg = daily_cfg;
    monthly_cfg.policy.frequency = Frequency::Monthly;
    const auto daily = run_backtest(h, daily_cfg);
    const auto monthly = run_backtest(h, monthly_cfg);
    const bool broke = daily.bankrupt && !monthly.bankrupt;
    detail += "; 1/x^2 daily " + std::string(daily.bankrupt ? "bankrupt on " + format_date(*daily.bankruptcy_date)
                                                               : "solvent")
              + ", monthly " + (monthly.bankrupt ? "bankrupt" : "solvent at " + format_fixed(monthly.final_value, 2));
    return {ordered && broke, detail};
}

}  // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: ladderfolio_acceptance <ladderfolio executable>\n";
        return 2;
    }
    const std::string cli = argv[1];

    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "two-stock weighting", 1.0, two_stock_weighting},
        {2, "fee arithmetic", 1.0, fee_arithmetic},
        {3, "Sharpe cross-check", 1.0, sharpe_cross_check},
        {4, "CAGR cross-check", 1.0, cagr_cross_check},
        {5, "oracle equivalence", 1.0, oracle_equivalence},
        {6, "fee-free compounding identity", 8.0, fee_free_compounding},
        {7, "cap-weight self-financing", 1.0, cap_weight_self_financing},
        {8, "bootstrap exhaustive oracle", 5.0, bootstrap_exhaustive},
        {9, "bootstrap determinism across workers", 10.0, [&] { return bootstrap_determinism(cli); }},
        {10, "risk-metric properties", 1.0, risk_metric_properties},
        {11, "ladder order", 5.0, ladder_order},
        {12, "monotone fee drag and bankruptcy", 10.0, fee_drag},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << " ["
                  << format_fixed(secs, 3) << " s" << (in_time ? "" : ", over budget") << "]\n";
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
