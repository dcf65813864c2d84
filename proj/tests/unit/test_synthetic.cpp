#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "ladderfolio/errors.hpp"
#include "ladderfolio/synthetic.hpp"

using namespace ladderfolio;
using ladderfolio::testing::ymd;

TEST_CASE("zero volatility, drift and dividends give a constant price path", "[synthetic]")
{
    SynthConfig cfg;
    cfg.n_securities = 1;
    cfg.n_years = 1;
    cfg.drift = {0.0, 0.0};
    cfg.volatility = {0.0, 0.0};
    cfg.dividend_yield = {0.0, 0.0};
    const auto h = generate_synthetic(cfg);
    REQUIRE(h.num_securities() == 1);
    const double p0 = h.close(0, 0);
    for (DayIndex d = 0; d < h.num_days(); ++d) {
        CHECK(h.close(0, d) == p0);
        CHECK(h.dividend(0, d) == 0.0);
    }
}

TEST_CASE("generation is a pure function of the config", "[synthetic]")
{
    SynthConfig cfg;
    cfg.n_securities = 20;
    cfg.n_years = 2;
    cfg.seed = 7;
    cfg.membership_churn_rate = 3.0;
    CHECK(generate_synthetic(cfg) == generate_synthetic(cfg));
    auto other = cfg;
    other.seed = 8;
    CHECK_FALSE(generate_synthetic(cfg) == generate_synthetic(other));
}

TEST_CASE("50 securities over 10 years give 50 members a day on about 2520 days", "[synthetic]")
{
    SynthConfig cfg;
    cfg.seed = 7;
    const auto h = generate_synthetic(cfg);
    CHECK(h.num_days() >= 2500);
    CHECK(h.num_days() <= 2520);
    for (DayIndex d = 0; d < h.num_days(); ++d) {
        REQUIRE(h.members(d).size() == 50);
    }
}

TEST_CASE("the synthetic calendar takes at most 21 weekdays a month", "[synthetic]")
{
    const auto cal = synthetic_calendar(ymd(1958, 1, 1), 1);
    std::map<unsigned, int> per_month;
    for (const auto& d : cal) {
        CHECK(is_weekday(d));
        ++per_month[static_cast<unsigned>(d.month())];
    }
    CHECK(cal.front() == ymd(1958, 1, 1));
    CHECK(per_month.size() == 12);
    std::size_t total = 0;
    for (const auto& [m, n] : per_month) {
        // Weekdays in the month by day-of-week arithmetic.
        int weekdays = 0;
        const auto first = std::chrono::sys_days{ymd(1958, m, 1)};
        const auto last = std::chrono::sys_days{std::chrono::year{1958} / std::chrono::month{m} / std::chrono::last};
        for (auto d = first; d <= last; d += std::chrono::days{1}) {
            const unsigned wd = std::chrono::weekday{d}.c_encoding();
            weekdays += (wd != 0 && wd != 6) ? 1 : 0;
        }
        CHECK(n == std::min(weekdays, 21));
        total += static_cast<std::size_t>(n);
    }
    CHECK(cal.size() == total);
    CHECK(total <= 252);
    CHECK(total >= 248);
    // Starting mid-month only loses the days before the start.
    const auto late = synthetic_calendar(ymd(1958, 1, 20), 1);
    CHECK(late.front() == ymd(1958, 1, 20));
    CHECK(late.size() < 252);
}

TEST_CASE("churn keeps the member count fixed and every member has a return after its first day",
          "[synthetic]")
{
    SynthConfig cfg;
    cfg.n_securities = 15;
    cfg.n_years = 3;
    cfg.seed = 3;
    cfg.membership_churn_rate = 6.0;
    const auto h = generate_synthetic(cfg);
    CHECK(h.num_securities() > 15);
    for (DayIndex d = 0; d < h.num_days(); ++d) {
        REQUIRE(h.members(d).size() == 15);
        for (SecurityIndex s : h.members(d)) {
            if (d > h.first_day(s)) {
                REQUIRE(h.has_return(s, d));
            }
        }
    }
}

TEST_CASE("dividends are paid quarterly from the prior close at the configured yield", "[synthetic]")
{
    SynthConfig cfg;
    cfg.n_securities = 3;
    cfg.n_years = 1;
    cfg.seed = 5;
    cfg.dividend_yield = {0.04, 0.04};
    const auto h = generate_synthetic(cfg);
    std::set<unsigned> months;
    for (DayIndex d = 1; d < h.num_days(); ++d) {
        for (SecurityIndex s = 0; s < h.num_securities(); ++s) {
            if (h.dividend(s, d) > 0.0) {
                months.insert(static_cast<unsigned>(h.calendar()[d].month()));
                CHECK_THAT(h.dividend(s, d), Catch::Matchers::WithinRel(0.01 * h.close(s, d - 1), 1e-12));
            }
        }
    }
    CHECK(months == std::set<unsigned>{3, 6, 9, 12});
}

TEST_CASE("small caps can be given strictly higher drift", "[synthetic]")
{
    SynthConfig cfg;
    cfg.n_securities = 10;
    cfg.n_years = 1;
    cfg.seed = 9;
    cfg.small_caps_drift_higher = true;
    cfg.volatility = {0.0, 0.0};
    cfg.dividend_yield = {0.0, 0.0};
    const auto h = generate_synthetic(cfg);
    // Without noise the price growth ranks the drifts.
    const DayIndex last = h.num_days() - 1;
    std::vector<std::pair<double, double>> cap_growth;
    for (SecurityIndex s = 0; s < h.num_securities(); ++s) {
        cap_growth.emplace_back(h.market_cap(s, 0), h.close(s, last) / h.close(s, 0));
    }
    std::sort(cap_growth.begin(), cap_growth.end());
    for (std::size_t i = 1; i < cap_growth.size(); ++i) {
        CHECK(cap_growth[i].second < cap_growth[i - 1].second);
    }
}

TEST_CASE("invalid synthetic configs are usage errors", "[synthetic]")
{
    SynthConfig cfg;
    cfg.n_securities = 0;
    CHECK_THROWS_AS(generate_synthetic(cfg), UsageError);
    cfg = {};
    cfg.volatility = {0.3, 0.1};
    CHECK_THROWS_AS(validate(cfg), UsageError);
    cfg = {};
    cfg.membership_churn_rate = -1.0;
    CHECK_THROWS_AS(validate(cfg), UsageError);
    cfg = {};
    cfg.n_years = 0;
    CHECK_THROWS_AS(validate(cfg), UsageError);
}
