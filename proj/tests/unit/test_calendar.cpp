#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "ladderfolio/calendar.hpp"

using namespace ladderfolio;
using ladderfolio::testing::ymd;

TEST_CASE("dates parse and format as ISO-8601", "[calendar]")
{
    const auto d = parse_date("1958-01-02");
    REQUIRE(d.has_value());
    CHECK(*d == ymd(1958, 1, 2));
    CHECK(format_date(*d) == "1958-01-02");
    CHECK(format_date(ymd(2015, 12, 31)) == "2015-12-31");
}

TEST_CASE("malformed or impossible dates are rejected", "[calendar]")
{
    for (const char* bad : {"", "1958-1-02", "1958/01/02", "2015-02-30", "2015-13-01", "20150101", "2015-01-01x",
                            "abcd-ef-gh"}) {
        INFO(bad);
        CHECK_FALSE(parse_date(bad).has_value());
    }
    CHECK(parse_date("2016-02-29").has_value());
    CHECK_FALSE(parse_date("2015-02-29").has_value());
}

TEST_CASE("months parse and format", "[calendar]")
{
    const auto m = parse_month("2015-12");
    REQUIRE(m.has_value());
    CHECK(format_month(*m) == "2015-12");
    CHECK_FALSE(parse_month("2015-00").has_value());
    CHECK_FALSE(parse_month("2015-1").has_value());
    CHECK_FALSE(parse_month("2015-12-01").has_value());
    CHECK(month_of(ymd(1958, 1, 2)) == Month{std::chrono::year{1958}, std::chrono::January});
}

TEST_CASE("day arithmetic helpers", "[calendar]")
{
    CHECK(days_between(ymd(2015, 12, 31), ymd(2016, 1, 1)) == 1);
    CHECK(days_between(ymd(2016, 1, 1), ymd(2015, 12, 31)) == -1);
    CHECK(days_between(ymd(2015, 1, 1), ymd(2016, 1, 1)) == 365);
    CHECK(is_weekday(ymd(1958, 1, 2)));       // Thursday
    CHECK_FALSE(is_weekday(ymd(1958, 1, 4))); // Saturday
    CHECK(year_of(ymd(1958, 6, 1)) == 1958);
}
