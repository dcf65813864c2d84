#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace ladderfolio::testing {

Date ymd(int y, unsigned m, unsigned d)
{
    return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

RecordBuilder& RecordBuilder::add(std::string id, Date date, double close, double shares, double dividend,
                                  bool member)
{
    rows.push_back({std::move(id), date, close, shares, dividend, member});
    return *this;
}

SynthConfig static_config(std::size_t n, std::size_t years, std::uint64_t seed, bool dividends)
{
    SynthConfig cfg;
    cfg.n_securities = n;
    cfg.n_years = years;
    cfg.seed = seed;
    cfg.membership_churn_rate = 0.0;
    cfg.dividend_yield = dividends ? Interval{0.01, 0.04} : Interval{0.0, 0.0};
    return cfg;
}

CpiSeries linear_cpi()
{
    const Month first{std::chrono::year{1958}, std::chrono::January};
    const std::size_t months = (2015 - 1958) * 12 + 12;
    std::vector<double> levels(months);
    for (std::size_t i = 0; i < months; ++i) {
        levels[i] = 28.6 + (236.525 - 28.6) * static_cast<double>(i) / static_cast<double>(months - 1);
    }
    return CpiSeries(first, std::move(levels));
}

std::filesystem::path scratch_dir(std::string_view name)
{
    auto dir = std::filesystem::temp_directory_path()
               / ("ladderfolio_" + std::to_string(::getpid())) / std::string(name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ladderfolio::testing
