#include "solarev/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string_view>

#include <fmt/format.h>

namespace solarev {

namespace {

double upper_bound_for(UnitTag unit) {
    return unit == UnitTag::energy_kwh ? std::numeric_limits<double>::infinity() : 1.0;
}

void check_value(double v, UnitTag unit, std::size_t h) {
    if (!(v >= 0.0)) throw InputError(fmt::format("negative energy at hour {}: {}", h, v));
    if (v > upper_bound_for(unit))
        throw InputError(fmt::format("{} value above 1 at hour {}: {}", to_string(unit), h, v));
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        out.push_back(line.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

struct Timestamp {
    std::chrono::year_month_day date;
    unsigned hour;
};

// Accepts exactly `YYYY-MM-DDTHH:00`.
std::optional<Timestamp> parse_timestamp(std::string_view s) {
    if (s.size() != 16 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
        s.substr(14) != "00")
        return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0, h = 0;
    if (!parse_number(s.substr(0, 4), y) || !parse_number(s.substr(5, 2), m) ||
        !parse_number(s.substr(8, 2), d) || !parse_number(s.substr(11, 2), h))
        return std::nullopt;
    const std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{m},
                                           std::chrono::day{d}};
    if (!date.ok() || h > 23) return std::nullopt;
    return Timestamp{date, h};
}

class YearIndexer {
public:
    std::size_t index(const Timestamp& ts, std::size_t line_no) {
        using namespace std::chrono;
        if (!year_) {
            if (ts.date.year().is_leap())
                throw InputError(fmt::format("line {}: leap year {} not supported (8760-hour years only)",
                                             line_no, static_cast<int>(ts.date.year())));
            year_ = ts.date.year();
        } else if (ts.date.year() != *year_) {
            throw InputError(fmt::format("line {}: timestamps span more than one year", line_no));
        }
        const auto day = (sys_days{ts.date} - sys_days{*year_ / January / 1}).count();
        return static_cast<std::size_t>(day) * kHoursPerDay + ts.hour;
    }

    HourlyProfile::Date start() const {
        using namespace std::chrono;
        return year_ ? (*year_ / January / 1) : HourlyProfile::default_start();
    }

private:
    std::optional<std::chrono::year> year_;
};

class CsvReader {
public:
    CsvReader(const std::filesystem::path& path, std::string_view expected_header) : in_(path) {
        if (!in_) throw InputError(fmt::format("cannot open {}", path.string()));
        std::string header;
        if (!next(header) || header != expected_header)
            throw InputError(fmt::format("{}: expected header '{}'", path.string(), expected_header));
    }

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    }

    std::size_t line_no() const { return line_no_; }

private:
    std::ifstream in_;
    std::size_t line_no_ = 0;
};

}  // namespace

const char* to_string(UnitTag tag) {
    switch (tag) {
        case UnitTag::energy_kwh: return "energy_kwh";
        case UnitTag::capacity_factor: return "capacity_factor";
        case UnitTag::fraction: return "fraction";
    }
    return "?";
}

HourlyProfile::HourlyProfile(std::vector<std::optional<double>> values, UnitTag unit, Date start_date)
    : values_(std::move(values)), unit_(unit), start_(start_date) {
    if (values_.size() != kHoursPerYear)
        throw InputError(fmt::format("profile must have {} hours, got {}", kHoursPerYear, values_.size()));
    if (!start_.ok()) throw InputError("invalid profile start date");
    for (std::size_t h = 0; h < values_.size(); ++h)
        if (values_[h]) check_value(*values_[h], unit_, h);
}

HourlyProfile::HourlyProfile(const std::vector<double>& values, UnitTag unit, Date start_date)
    : HourlyProfile(std::vector<std::optional<double>>(values.begin(), values.end()), unit, start_date) {}

HourlyProfile HourlyProfile::constant(double value, UnitTag unit, Date start_date) {
    return HourlyProfile(std::vector<double>(kHoursPerYear, value), unit, start_date);
}

std::size_t HourlyProfile::n_missing() const {
    return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::nullopt));
}

double HourlyProfile::total() const {
    double sum = 0.0;
    for (const auto& v : values_)
        if (v) sum += *v;
    return sum;
}

double HourlyProfile::mean() const {
    const std::size_t present = size() - n_missing();
    return present == 0 ? 0.0 : total() / static_cast<double>(present);
}

std::vector<double> HourlyProfile::dense() const {
    std::vector<double> out(values_.size());
    for (std::size_t h = 0; h < values_.size(); ++h) {
        if (!values_[h]) throw InputError(fmt::format("profile has a missing value at hour {}", h));
        out[h] = *values_[h];
    }
    return out;
}

std::map<std::string, HourlyProfile> load_demand_csv(const std::filesystem::path& path) {
    CsvReader reader(path, "house_id,timestamp,kwh");
    YearIndexer indexer;
    std::map<std::string, std::vector<std::optional<double>>> rows;
    std::string line;
    while (reader.next(line)) {
        const auto fields = split(line, ',');
        const auto n = reader.line_no();
        if (fields.size() != 3 || fields[0].empty())
            throw InputError(fmt::format("line {}: expected 3 fields", n));
        const auto ts = parse_timestamp(fields[1]);
        if (!ts) throw InputError(fmt::format("line {}: malformed timestamp '{}'", n, fields[1]));
        double kwh = 0.0;
        if (!parse_number(fields[2], kwh) || !std::isfinite(kwh))
            throw InputError(fmt::format("line {}: malformed kwh '{}'", n, fields[2]));
        if (kwh < 0.0) throw InputError(fmt::format("line {}: negative energy {}", n, kwh));
        const std::size_t h = indexer.index(*ts, n);
        auto& series = rows.try_emplace(std::string(fields[0]), kHoursPerYear).first->second;
        if (series[h])
            throw InputError(fmt::format("line {}: duplicate key ({}, {})", n, fields[0], fields[1]));
        series[h] = kwh;
    }
    std::map<std::string, HourlyProfile> out;
    for (auto& [id, values] : rows)
        out.emplace(id, HourlyProfile(std::move(values), UnitTag::energy_kwh, indexer.start()));
    return out;
}

HourlyProfile load_cf_csv(const std::filesystem::path& path) {
    CsvReader reader(path, "timestamp,cf");
    YearIndexer indexer;
    std::vector<std::optional<double>> values(kHoursPerYear);
    std::string line;
    while (reader.next(line)) {
        const auto fields = split(line, ',');
        const auto n = reader.line_no();
        if (fields.size() != 2) throw InputError(fmt::format("line {}: expected 2 fields", n));
        const auto ts = parse_timestamp(fields[0]);
        if (!ts) throw InputError(fmt::format("line {}: malformed timestamp '{}'", n, fields[0]));
        double cf = 0.0;
        if (!parse_number(fields[1], cf) || !std::isfinite(cf))
            throw InputError(fmt::format("line {}: malformed cf '{}'", n, fields[1]));
        if (cf < 0.0 || cf > 1.0) throw InputError(fmt::format("line {}: cf {} outside [0,1]", n, cf));
        const std::size_t h = indexer.index(*ts, n);
        if (values[h]) throw InputError(fmt::format("line {}: duplicate timestamp {}", n, fields[0]));
        values[h] = cf;
    }
    return HourlyProfile(std::move(values), UnitTag::capacity_factor, indexer.start());
}

HourlyProfile fill_gaps(const HourlyProfile& profile) {
    if (profile.n_missing() == profile.size()) throw InputError("unrepairable profile: no values present");
    const auto& src = profile.values();
    std::vector<std::optional<double>> out = src;
    const long last_day = static_cast<long>(kDaysPerYear) - 1;
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (src[i]) continue;
        const long day = static_cast<long>(day_of(i));
        const std::size_t hour = hour_of_day(i);
        // Only originally present values contribute, so the result is order independent.
        for (long radius = 1;; ++radius) {
            const long lo = std::max(0L, day - radius);
            const long hi = std::min(last_day, day + radius);
            double sum = 0.0;
            int count = 0;
            for (long d = lo; d <= hi; ++d) {
                if (const auto& v = src[static_cast<std::size_t>(d) * kHoursPerDay + hour]) {
                    sum += *v;
                    ++count;
                }
            }
            if (count > 0) {
                out[i] = sum / count;
                break;
            }
            if (lo == 0 && hi == last_day) {
                // This hour-of-day is missing on every day; fall back to the whole profile.
                out[i] = profile.mean();
                break;
            }
        }
    }
    return HourlyProfile(std::move(out), profile.unit(), profile.start_date());
}

HourlyProfile aggregate(std::span<const HourlyProfile> profiles) {
    if (profiles.empty()) throw InputError("aggregate: no profiles");
    const auto& first = profiles.front();
    if (first.unit() != UnitTag::energy_kwh) throw InputError("aggregate: profiles must be energy_kwh");
    std::vector<double> sum(first.size(), 0.0);
    for (const auto& p : profiles) {
        if (p.size() != first.size()) throw InputError("aggregate: mismatched lengths");
        if (p.unit() != first.unit()) throw InputError("aggregate: mismatched unit tags");
        if (p.start_date() != first.start_date()) throw InputError("aggregate: mismatched start dates");
        const auto dense = p.dense();
        for (std::size_t h = 0; h < sum.size(); ++h) sum[h] += dense[h];
    }
    return HourlyProfile(sum, first.unit(), first.start_date());
}

ProfileStats profile_stats(const HourlyProfile& profile) {
    ProfileStats stats;
    bool any = false;
    for (const auto& v : profile.values()) {
        if (!v) {
            ++stats.n_missing;
            continue;
        }
        stats.annual_total_kwh += *v;
        stats.hourly_max_kw = any ? std::max(stats.hourly_max_kw, *v) : *v;
        stats.hourly_min_kw = any ? std::min(stats.hourly_min_kw, *v) : *v;
        any = true;
    }
    return stats;
}

std::string format_timestamp(HourlyProfile::Date start, std::size_t h) {
    using namespace std::chrono;
    const year_month_day date{sys_days{start} + days{static_cast<int>(day_of(h))}};
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:00", static_cast<int>(date.year()),
                       static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                       hour_of_day(h));
}

}  // namespace solarev
