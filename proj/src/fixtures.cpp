#include "solarev/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "solarev/pv_model.hpp"
#include "solarev/rng.hpp"

namespace solarev {

namespace {

using std::numbers::pi;

double bump(double x, double centre, double width) {
    const double d = (x - centre) / width;
    return std::exp(-0.5 * d * d);
}

// Circular distance in hours, so evening peaks wrap into the night.
double hour_bump(double hour, double centre, double width) {
    double d = std::fmod(std::abs(hour - centre), 24.0);
    d = std::min(d, 24.0 - d);
    return bump(d, 0.0, width);
}

HourlyProfile::Date jan1(int year) {
    using namespace std::chrono;
    return std::chrono::year{year} / January / 1;
}

std::vector<double> residential_shape(Rng& rng) {
    const double morning = 7.0 + rng.uniform(-1.0, 1.0);
    const double evening = 19.5 + rng.uniform(-1.5, 1.5);
    const double morning_amp = rng.uniform(0.6, 1.4);
    const double evening_amp = rng.uniform(0.8, 1.6);
    const double heater = rng.uniform(0.0, 1.2);  // night storage heating, winter only
    const double winter = rng.uniform(0.3, 0.7);
    const double cooling = rng.uniform(0.05, 0.35);
    const double base = rng.uniform(0.25, 0.5);

    std::vector<double> out(kHoursPerYear);
    for (std::size_t i = 0; i < kHoursPerYear; ++i) {
        const double day = static_cast<double>(day_of(i));
        const double hour = static_cast<double>(hour_of_day(i));
        const double season_heat = 0.5 * (1.0 + std::cos(2.0 * pi * (day - 15.0) / 365.0));  // 1 mid-January
        const double season_cool = bump(day, 215.0, 25.0);
        double v = base;
        v += morning_amp * hour_bump(hour, morning, 1.2) * (1.0 + winter * season_heat);
        v += evening_amp * hour_bump(hour, evening, 2.0) * (1.0 + 0.5 * winter * season_heat);
        if (hour >= 23.0 || hour < 7.0) v += heater * season_heat * season_heat;
        v += cooling * season_cool * hour_bump(hour, 15.0, 4.0);
        v *= std::exp(rng.normal(0.0, 0.3));
        if (rng.uniform() < 0.01) v += rng.uniform(0.5, 3.0);  // appliance spikes
        out[i] = v;
    }
    return out;
}

std::vector<double> commercial_shape(Rng& rng) {
    std::vector<double> out(kHoursPerYear);
    for (std::size_t i = 0; i < kHoursPerYear; ++i) {
        const double day = static_cast<double>(day_of(i));
        const double hour = static_cast<double>(hour_of_day(i));
        const double season_heat = 0.5 * (1.0 + std::cos(2.0 * pi * (day - 15.0) / 365.0));
        const double season_cool = bump(day, 210.0, 35.0);
        const double open = (hour >= 8.0 && hour < 21.0) ? 1.0 : 0.0;
        double v = 0.22;
        v += open * (1.0 + 0.35 * season_cool * hour_bump(hour, 14.0, 4.0));
        v += 0.25 * season_heat * hour_bump(hour, 8.5, 1.0);
        v *= std::exp(rng.normal(0.0, 0.05));
        out[i] = v;
    }
    return out;
}

void scale_to(std::vector<double>& values, double total) {
    double sum = 0.0;
    for (double v : values) sum += v;
    for (double& v : values) v *= total / sum;
}

std::string house_id(FixtureKind kind, int i) {
    return fmt::format("{}{:03d}", kind == FixtureKind::commercial ? "B" : "H", i + 1);
}

}  // namespace

Fixtures synth_fixtures(const FixtureOptions& o) {
    if (o.n_houses < 1) throw InputError("fixtures need at least one house");
    if (!(o.annual_kwh_mean > 0.0)) throw InputError("fixture annual demand must be > 0");
    if (!(o.annual_kwh_spread >= 0.0)) throw InputError("fixture spread must be >= 0");

    std::vector<std::vector<double>> shapes;
    std::vector<double> totals;
    for (int i = 0; i < o.n_houses; ++i) {
        Rng rng(derive_seed(o.seed, static_cast<std::uint64_t>(i)));
        shapes.push_back(o.kind == FixtureKind::commercial ? commercial_shape(rng) : residential_shape(rng));
        totals.push_back(std::exp(rng.normal(0.0, o.annual_kwh_spread)));
    }
    double mean_total = 0.0;
    for (double t : totals) mean_total += t;
    mean_total /= static_cast<double>(totals.size());

    Fixtures f{{}, {}, synth_cf_profile(derive_seed(o.seed, 0xCF), o.target_cf, o.year)};
    for (int i = 0; i < o.n_houses; ++i) {
        auto& shape = shapes[static_cast<std::size_t>(i)];
        scale_to(shape, o.annual_kwh_mean * totals[static_cast<std::size_t>(i)] / mean_total);
        f.house_ids.push_back(house_id(o.kind, i));
        f.demand.emplace_back(shape, UnitTag::energy_kwh, jan1(o.year));
    }
    return f;
}

HourlyProfile synth_cf_profile(std::uint64_t seed, double target_cf, int year) {
    Rng rng(seed);
    std::vector<double> out(kHoursPerYear, 0.0);
    double cloud = 0.7;
    for (std::size_t d = 0; d < kDaysPerYear; ++d) {
        const double season = std::cos(2.0 * pi * (static_cast<double>(d) - 172.0) / 365.0);  // 1 at midsummer
        const double half_day = 6.0 + 1.2 * season;
        const double sunrise = 12.0 - half_day, sunset = 12.0 + half_day;
        cloud = std::clamp(0.6 * cloud + 0.4 * rng.uniform(0.1, 1.0), 0.1, 1.0);
        const double amplitude = 0.8 + 0.1 * season;
        for (std::size_t h = 0; h < kHoursPerDay; ++h) {
            const double mid = static_cast<double>(h) + 0.5;
            if (mid <= sunrise || mid >= sunset) continue;
            const double elevation = std::sin(pi * (mid - sunrise) / (sunset - sunrise));
            const double noise = std::clamp(1.0 + rng.normal(0.0, 0.1), 0.5, 1.5);
            out[d * kHoursPerDay + h] = std::min(1.0, amplitude * cloud * elevation * noise);
        }
    }
    return calibrate_cf(HourlyProfile(out, UnitTag::capacity_factor, jan1(year)), target_cf);
}

HourlyProfile shape_to_stats(const HourlyProfile& shape, double annual_total, double hourly_max, double hourly_min) {
    const auto x = shape.dense();
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it, hi = *hi_it;
    const double n = static_cast<double>(x.size());
    if (!(hi > lo)) throw InputError("shape_to_stats needs a non-constant shape");
    if (!(hourly_max > hourly_min && hourly_min >= 0.0)) throw InputError("invalid target extremes");
    // v = min + (max - min) * s^gamma with s in [0, 1]; the sum falls monotonically in gamma.
    const double target = (annual_total - n * hourly_min) / (hourly_max - hourly_min);
    auto sum_at = [&](double gamma) {
        double s = 0.0;
        for (double v : x) s += std::pow((v - lo) / (hi - lo), gamma);
        return s;
    };
    double g_lo = 1e-3, g_hi = 50.0;
    if (!(sum_at(g_lo) >= target && sum_at(g_hi) <= target))
        throw InputError("target annual total unreachable for this shape");
    for (int i = 0; i < 200 && g_hi - g_lo > 1e-13; ++i) {
        const double mid = 0.5 * (g_lo + g_hi);
        (sum_at(mid) > target ? g_lo : g_hi) = mid;
    }
    const double gamma = 0.5 * (g_lo + g_hi);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = hourly_min + (hourly_max - hourly_min) * std::pow((x[i] - lo) / (hi - lo), gamma);
    // Remove the residual of the bisection from interior hours so the extremes stay exact.
    double sum = 0.0;
    for (double v : out) sum += v;
    const double interior = sum - hourly_max - hourly_min;
    const double k = (annual_total - hourly_max - hourly_min) / interior;
    const auto i_lo = static_cast<std::size_t>(lo_it - x.begin()), i_hi = static_cast<std::size_t>(hi_it - x.begin());
    for (std::size_t i = 0; i < out.size(); ++i)
        if (i != i_lo && i != i_hi) out[i] = std::clamp(hourly_min + (out[i] - hourly_min) * k, hourly_min, hourly_max);
    return HourlyProfile(out, UnitTag::energy_kwh, shape.start_date());
}

HourlyProfile reference_house_profile(std::uint64_t seed) {
    FixtureOptions o;
    o.n_houses = 1;
    o.seed = seed;
    return shape_to_stats(synth_fixtures(o).demand.front(), 5915.0, 12.3, 0.05);
}

void write_demand_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                      const std::vector<HourlyProfile>& profiles) {
    if (ids.size() != profiles.size()) throw InputError("house ids and profiles differ in count");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
    out << "house_id,timestamp,kwh\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& p = profiles[i];
        for (std::size_t h = 0; h < p.size(); ++h)
            if (p[h]) out << fmt::format("{},{},{}\n", ids[i], format_timestamp(p.start_date(), h), *p[h]);
    }
}

void write_cf_csv(const std::filesystem::path& path, const HourlyProfile& cf) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
    out << "timestamp,cf\n";
    for (std::size_t h = 0; h < cf.size(); ++h)
        if (cf[h]) out << fmt::format("{},{}\n", format_timestamp(cf.start_date(), h), *cf[h]);
}

}  // namespace solarev
