#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "solarev/optimizer.hpp"
#include "solarev/profiles.hpp"

namespace solarev {

struct FixtureOptions {
    FixtureKind kind = FixtureKind::residential;
    int n_houses = 50;
    std::uint64_t seed = 1;
    double annual_kwh_mean = 5915.0;
    /// Log-normal spread of per-house annual totals; 0 gives identical totals.
    double annual_kwh_spread = 0.35;
    double target_cf = 0.135;
    int year = 2018;
};

struct Fixtures {
    std::vector<std::string> house_ids;
    std::vector<HourlyProfile> demand;
    HourlyProfile cf;
};

/// Synthetic demand (residential: morning and evening peaks, winter-heavy;
/// commercial: daytime plateau) and a calibrated capacity-factor profile.
/// The mean annual total over houses equals `annual_kwh_mean` exactly.
Fixtures synth_fixtures(const FixtureOptions& options);

/// Daylight-bounded sinusoid with daily cloudiness, calibrated to `target_cf`.
HourlyProfile synth_cf_profile(std::uint64_t seed, double target_cf, int year = 2018);

/// Monotone reshaping of `shape` to hit an annual total and an hourly max and min exactly.
HourlyProfile shape_to_stats(const HourlyProfile& shape, double annual_total, double hourly_max, double hourly_min);

/// Single-house profile with the mean-house smart-meter statistics (5,915 kWh, 12.3 kW peak, 0.05 kW floor).
HourlyProfile reference_house_profile(std::uint64_t seed);

void write_demand_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                      const std::vector<HourlyProfile>& profiles);
void write_cf_csv(const std::filesystem::path& path, const HourlyProfile& cf);

}  // namespace solarev
