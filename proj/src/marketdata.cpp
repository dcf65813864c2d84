#include "ladderfolio/marketdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "ladderfolio/errors.hpp"

namespace ladderfolio {

namespace {

std::vector<std::string_view> split_csv_line(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    for (auto& f : fields) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) {
            f.remove_prefix(1);
        }
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) {
            f.remove_suffix(1);
        }
    }
    return fields;
}

std::optional<double> parse_number(std::string_view text)
{
    if (text.empty()) {
        return std::nullopt;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

void chomp(std::string& line)
{
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
        line.pop_back();
    }
}

[[noreturn]] void row_error(std::size_t line_no, const std::string& what)
{
    throw DataError("row " + std::to_string(line_no) + ": " + what);
}

std::string describe(std::string_view id, Date d)
{
    return "security '" + std::string(id) + "' on " + format_date(d);
}

void write_fixed(std::ostream& out, double value, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    out << buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// MarketHistory

MarketHistory::MarketHistory(std::vector<SecurityDay> records)
{
    for (const auto& r : records) {
        if (!r.date.ok()) {
            throw DataError("invalid date for security '" + r.security_id + "'");
        }
        if (!(r.close > 0.0)) {
            throw DataError("nonpositive close for " + describe(r.security_id, r.date));
        }
        if (!(r.shares_outstanding > 0.0)) {
            throw DataError("nonpositive shares outstanding for " + describe(r.security_id, r.date));
        }
        if (!(r.dividend >= 0.0)) {
            throw DataError("negative dividend for " + describe(r.security_id, r.date));
        }
    }

    std::sort(records.begin(), records.end(), [](const SecurityDay& a, const SecurityDay& b) {
        if (a.security_id != b.security_id) {
            return a.security_id < b.security_id;
        }
        return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
    });

    std::set<std::chrono::sys_days> dates;
    for (const auto& r : records) {
        dates.insert(std::chrono::sys_days{r.date});
    }
    calendar_.reserve(dates.size());
    for (auto d : dates) {
        calendar_.emplace_back(d);
    }
    num_records_ = records.size();

    std::size_t i = 0;
    while (i < records.size()) {
        Series ser;
        ser.id = records[i].security_id;
        ser.first = *day_index(records[i].date);
        DayIndex expected = ser.first;
        for (; i < records.size() && records[i].security_id == ser.id; ++i) {
            const auto& r = records[i];
            const DayIndex d = *day_index(r.date);
            if (d + 1 == expected) {
                throw DataError("duplicate record for " + describe(r.security_id, r.date));
            }
            if (d != expected) {
                throw DataError("gap in listing of security '" + ser.id + "' before "
                                + format_date(r.date) + " (missing " + format_date(calendar_[expected])
                                + ")");
            }
            ser.close.push_back(r.close);
            ser.shares.push_back(r.shares_outstanding);
            ser.dividend.push_back(r.dividend);
            ser.member.push_back(r.is_member ? 1 : 0);
            ++expected;
        }
        index_.emplace(ser.id, series_.size());
        series_.push_back(std::move(ser));
    }

    members_.assign(calendar_.size(), {});
    for (SecurityIndex s = 0; s < series_.size(); ++s) {
        for (DayIndex d = first_day(s); d <= last_day(s); ++d) {
            if (is_member(s, d)) {
                members_[d].push_back(s);
            }
        }
    }
}

std::optional<DayIndex> MarketHistory::day_index(Date d) const
{
    const auto it = std::lower_bound(
        calendar_.begin(), calendar_.end(), d,
        [](Date a, Date b) { return std::chrono::sys_days{a} < std::chrono::sys_days{b}; });
    if (it == calendar_.end() || *it != d) {
        return std::nullopt;
    }
    return static_cast<DayIndex>(it - calendar_.begin());
}

std::optional<DayIndex> MarketHistory::day_at_or_after(Date d) const
{
    const auto it = std::lower_bound(
        calendar_.begin(), calendar_.end(), d,
        [](Date a, Date b) { return std::chrono::sys_days{a} < std::chrono::sys_days{b}; });
    if (it == calendar_.end()) {
        return std::nullopt;
    }
    return static_cast<DayIndex>(it - calendar_.begin());
}

std::optional<DayIndex> MarketHistory::day_at_or_before(Date d) const
{
    const auto it = std::upper_bound(
        calendar_.begin(), calendar_.end(), d,
        [](Date a, Date b) { return std::chrono::sys_days{a} < std::chrono::sys_days{b}; });
    if (it == calendar_.begin()) {
        return std::nullopt;
    }
    return static_cast<DayIndex>(it - calendar_.begin() - 1);
}

std::optional<SecurityIndex> MarketHistory::find_security(std::string_view id) const
{
    const auto it = index_.find(id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<SecurityDay> MarketHistory::records() const
{
    std::vector<SecurityDay> out;
    out.reserve(num_records_);
    for (DayIndex d = 0; d < calendar_.size(); ++d) {
        for (SecurityIndex s = 0; s < series_.size(); ++s) {
            if (listed(s, d)) {
                out.push_back({series_[s].id, calendar_[d], close(s, d), shares(s, d), dividend(s, d),
                               is_member(s, d)});
            }
        }
    }
    return out;
}

bool MarketHistory::operator==(const MarketHistory& other) const
{
    return calendar_ == other.calendar_ && series_ == other.series_;
}

double market_cap(const MarketHistory& h, std::string_view security_id, Date date)
{
    const auto s = h.find_security(security_id);
    const auto d = h.day_index(date);
    if (!s || !d || !h.listed(*s, *d)) {
        throw LookupError("no record for " + describe(security_id, date));
    }
    return h.market_cap(*s, *d);
}

double total_return(const MarketHistory& h, std::string_view security_id, Date date)
{
    const auto s = h.find_security(security_id);
    const auto d = h.day_index(date);
    if (!s || !d || !h.listed(*s, *d)) {
        throw LookupError("no record for " + describe(security_id, date));
    }
    if (!h.has_return(*s, *d)) {
        throw LookupError("no prior-day record for " + describe(security_id, date));
    }
    return h.total_return(*s, *d);
}

MarketHistory parse_history(std::istream& in)
{
    static constexpr std::string_view kHeader = "date,security_id,close,shares_outstanding,dividend,member";

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<SecurityDay> records;
    std::map<std::pair<std::string, std::chrono::sys_days>, std::size_t> seen;

    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty()) {
            continue;
        }
        if (!have_header) {
            std::string normalized;
            for (char c : line) {
                if (c != ' ') {
                    normalized.push_back(c);
                }
            }
            if (normalized != kHeader) {
                throw DataError("row " + std::to_string(line_no) + ": expected header '"
                                + std::string(kHeader) + "'");
            }
            have_header = true;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 6) {
            row_error(line_no, "expected 6 fields, found " + std::to_string(f.size()));
        }
        SecurityDay r;
        const auto date = parse_date(f[0]);
        if (!date) {
            row_error(line_no, "bad date '" + std::string(f[0]) + "'");
        }
        r.date = *date;
        if (f[1].empty()) {
            row_error(line_no, "empty security_id");
        }
        r.security_id = std::string(f[1]);
        const auto close = parse_number(f[2]);
        if (!close || *close <= 0.0) {
            row_error(line_no, "close must be a positive number, got '" + std::string(f[2]) + "'");
        }
        r.close = *close;
        const auto shares = parse_number(f[3]);
        if (!shares || *shares <= 0.0 || std::floor(*shares) != *shares) {
            row_error(line_no,
                      "shares_outstanding must be a positive whole number, got '" + std::string(f[3]) + "'");
        }
        r.shares_outstanding = *shares;
        const auto dividend = parse_number(f[4]);
        if (!dividend || *dividend < 0.0) {
            row_error(line_no, "dividend must be a nonnegative number, got '" + std::string(f[4]) + "'");
        }
        r.dividend = *dividend;
        if (f[5] == "1") {
            r.is_member = true;
        } else if (f[5] == "0") {
            r.is_member = false;
        } else {
            row_error(line_no, "member must be 0 or 1, got '" + std::string(f[5]) + "'");
        }
        const auto key = std::make_pair(r.security_id, std::chrono::sys_days{r.date});
        if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
            row_error(line_no, "duplicate (security_id, date) " + describe(r.security_id, r.date)
                                   + ", first seen at row " + std::to_string(it->second));
        }
        records.push_back(std::move(r));
    }
    if (!have_header) {
        throw DataError("prices file is empty");
    }
    return MarketHistory(std::move(records));
}

MarketHistory load_history(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open prices file '" + path.string() + "'");
    }
    try {
        return parse_history(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_history(std::ostream& out, const MarketHistory& h)
{
    out << "date,security_id,close,shares_outstanding,dividend,member\n";
    for (DayIndex d = 0; d < h.num_days(); ++d) {
        const std::string date = format_date(h.calendar()[d]);
        for (SecurityIndex s = 0; s < h.num_securities(); ++s) {
            if (!h.listed(s, d)) {
                continue;
            }
            out << date << ',' << h.security_id(s) << ',';
            write_fixed(out, h.close(s, d), 6);
            out << ',';
            write_fixed(out, h.shares(s, d), 0);
            out << ',';
            write_fixed(out, h.dividend(s, d), 6);
            out << ',' << (h.is_member(s, d) ? '1' : '0') << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// CPI

CpiSeries::CpiSeries(Month first, std::vector<double> levels) : first_(first), levels_(std::move(levels))
{
    if (levels_.empty()) {
        throw DataError("CPI series is empty");
    }
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (!(levels_[i] > 0.0)) {
            throw DataError("nonpositive CPI level in " + format_month(first_ + std::chrono::months{i}));
        }
    }
}

CpiSeries CpiSeries::flat(Month first, Month last, double level)
{
    const auto n = (last - first).count() + 1;
    if (n <= 0) {
        throw DataError("flat CPI range is empty");
    }
    return CpiSeries(first, std::vector<double>(static_cast<std::size_t>(n), level));
}

Month CpiSeries::last_month() const
{
    return first_ + std::chrono::months{static_cast<long>(levels_.size()) - 1};
}

bool CpiSeries::covers(Month m) const
{
    const auto offset = (m - first_).count();
    return offset >= 0 && static_cast<std::size_t>(offset) < levels_.size();
}

double CpiSeries::level(Month m) const
{
    if (!covers(m)) {
        throw LookupError("CPI series has no level for " + format_month(m));
    }
    return levels_[static_cast<std::size_t>((m - first_).count())];
}

double deflate(double amount_2015, Month target_month, const CpiSeries& cpi)
{
    return amount_2015 * cpi.level(target_month) / cpi.level(kCpiAnchor);
}

double convert_dollars(double amount, Month from, Month to, const CpiSeries& cpi)
{
    return amount * cpi.level(to) / cpi.level(from);
}

CpiSeries parse_cpi(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::map<std::chrono::sys_days, double> by_month;

    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty()) {
            continue;
        }
        if (!have_header) {
            if (line != "month,cpi") {
                throw DataError("row " + std::to_string(line_no) + ": expected header 'month,cpi'");
            }
            have_header = true;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 2) {
            row_error(line_no, "expected 2 fields, found " + std::to_string(f.size()));
        }
        const auto month = parse_month(f[0]);
        if (!month) {
            row_error(line_no, "bad month '" + std::string(f[0]) + "'");
        }
        const auto level = parse_number(f[1]);
        if (!level || *level <= 0.0) {
            row_error(line_no, "CPI level must be positive, got '" + std::string(f[1]) + "'");
        }
        const std::chrono::sys_days key{*month / std::chrono::day{1}};
        if (!by_month.emplace(key, *level).second) {
            row_error(line_no, "duplicate month " + format_month(*month));
        }
    }
    if (by_month.empty()) {
        throw DataError("CPI file has no rows");
    }

    const Date first_day{by_month.begin()->first};
    const Month first = month_of(first_day);
    std::vector<double> levels;
    Month expected = first;
    for (const auto& [key, level] : by_month) {
        const Month m = month_of(Date{key});
        if (m != expected) {
            throw DataError("CPI series missing " + format_month(expected));
        }
        levels.push_back(level);
        expected += std::chrono::months{1};
    }
    return CpiSeries(first, std::move(levels));
}

CpiSeries load_cpi(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open CPI file '" + path.string() + "'");
    }
    try {
        return parse_cpi(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace ladderfolio
