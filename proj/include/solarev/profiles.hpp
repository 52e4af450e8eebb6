#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "solarev/calendar.hpp"

namespace solarev {

/// Raised for malformed or inconsistent input data (CSV rows, profile contents).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class UnitTag { energy_kwh, capacity_factor, fraction };

const char* to_string(UnitTag tag);

/// One non-leap year of hourly values. Index 0 is 00:00 on `start_date`.
///
/// Values may be missing (gappy smart-meter data) until repaired with
/// fill_gaps(). Present values are non-negative; capacity-factor and fraction
/// profiles are additionally bounded by 1.
class HourlyProfile {
public:
    using Date = std::chrono::year_month_day;

    HourlyProfile(std::vector<std::optional<double>> values, UnitTag unit,
                  Date start_date = default_start());
    HourlyProfile(const std::vector<double>& values, UnitTag unit,
                  Date start_date = default_start());

    static HourlyProfile constant(double value, UnitTag unit, Date start_date = default_start());
    static constexpr Date default_start() {
        using namespace std::chrono;
        return year{2018} / January / 1;
    }

    std::size_t size() const { return values_.size(); }
    const std::optional<double>& operator[](std::size_t h) const { return values_[h]; }
    const std::vector<std::optional<double>>& values() const { return values_; }

    UnitTag unit() const { return unit_; }
    Date start_date() const { return start_; }

    std::size_t n_missing() const;
    bool complete() const { return n_missing() == 0; }

    /// Sum of present values.
    double total() const;
    /// Mean of present values (0 when nothing is present).
    double mean() const;

    /// Dense copy; throws InputError if any value is missing.
    std::vector<double> dense() const;

    bool operator==(const HourlyProfile&) const = default;

private:
    std::vector<std::optional<double>> values_;
    UnitTag unit_;
    Date start_;
};

struct ProfileStats {
    double annual_total_kwh = 0.0;
    double hourly_max_kw = 0.0;
    double hourly_min_kw = 0.0;
    std::size_t n_missing = 0;
};

/// Reads `house_id,timestamp,kwh` rows. Absent (house, hour) pairs become
/// missing values. Houses are returned ordered by id.
std::map<std::string, HourlyProfile> load_demand_csv(const std::filesystem::path& path);

/// Reads a `timestamp,cf` capacity-factor file into a (possibly gappy) profile.
HourlyProfile load_cf_csv(const std::filesystem::path& path);

/// Replaces every missing (day d, hour h) with the mean of present values at
/// hour h on days d-1..d+1, widening the window by a day on each side until
/// something is present. The window is clamped to the year.
HourlyProfile fill_gaps(const HourlyProfile& profile);

/// Element-wise sum of gap-free energy profiles.
HourlyProfile aggregate(std::span<const HourlyProfile> profiles);

ProfileStats profile_stats(const HourlyProfile& profile);

/// `YYYY-MM-DDTHH:00` for hour index `h` relative to `start`.
std::string format_timestamp(HourlyProfile::Date start, std::size_t h);

}  // namespace solarev
