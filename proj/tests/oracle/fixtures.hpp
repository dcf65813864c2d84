#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ladderfolio/calendar.hpp"
#include "ladderfolio/marketdata.hpp"
#include "ladderfolio/synthetic.hpp"

namespace ladderfolio::testing {

Date ymd(int y, unsigned m, unsigned d);

struct RecordBuilder {
    std::vector<SecurityDay> rows;

    RecordBuilder& add(std::string id, Date date, double close, double shares = 1000.0, double dividend = 0.0,
                       bool member = true);
    MarketHistory build() const { return MarketHistory(rows); }
};

/// Seeded synthetic universe with no churn.
SynthConfig static_config(std::size_t n, std::size_t years, std::uint64_t seed, bool dividends = false);

/// CPI running linearly from 28.6 in 1958-01 to 236.525 in 2015-12.
CpiSeries linear_cpi();

/// Empty scratch directory unique to `name` under the system temp dir.
std::filesystem::path scratch_dir(std::string_view name);

std::string read_file(const std::filesystem::path& path);

}  // namespace ladderfolio::testing
