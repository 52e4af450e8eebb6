#pragma once

#include <cstdint>
#include <vector>

#include "solarev/profiles.hpp"

namespace solarev {

inline constexpr int kDaytimeStart = 7;  // trips start in [7, 19)
inline constexpr int kDaytimeEnd = 19;

/// Trip start hours for one vehicle, one entry per day; each trip lasts one hour.
struct TripSchedule {
    std::vector<std::vector<int>> hours_by_day;
    int trips_per_day = 3;
    double energy_per_trip_kwh = 1.1;

    std::size_t n_days() const { return hours_by_day.size(); }
};

struct FleetConfig {
    int n_ev = 1;
    double battery_kwh_per_ev = 40.0;
    double v2h_fraction = 0.5;           // share of each battery usable as home storage
    double daytime_availability = 0.75;  // pooled-mode share of the fleet at home during the day
    int daytime_start = kDaytimeStart;
    int daytime_end = kDaytimeEnd;
    int trips_per_day = 3;
    double energy_per_trip_kwh = 1.1;
    double km_per_trip = 5.8;
    std::uint64_t seed = 1;

    void validate() const;
    int window_hours() const { return daytime_end - daytime_start; }
    double nominal_kwh() const { return n_ev * battery_kwh_per_ev; }
    double v2h_usable_kwh() const { return nominal_kwh() * v2h_fraction; }
    double driving_reserve_kwh() const { return nominal_kwh() * (1.0 - v2h_fraction); }

    bool operator==(const FleetConfig&) const = default;
};

enum class FleetMode { individual, pooled };

/// Hourly fraction of the storage that is plugged in, in [0, 1].
struct AvailabilityProfile {
    std::vector<double> values;
};

/// Draws `trips_per_day` distinct hours per day uniformly from the daytime window.
TripSchedule sample_trips(std::uint64_t seed, int n_days, int trips_per_day,
                          int window_start = kDaytimeStart, int window_end = kDaytimeEnd,
                          double energy_per_trip_kwh = 1.1);

/// Schedule for vehicle `vehicle_id` of the fleet; depends only on (fleet.seed, vehicle_id).
TripSchedule vehicle_schedule(const FleetConfig& fleet, int vehicle_id, int n_days = kDaysPerYear);

/// 0 while the vehicle is out on a trip, 1 otherwise.
AvailabilityProfile availability_from_schedule(const TripSchedule& schedule);

/// Individual mode: one profile per vehicle. Pooled mode: a single profile at
/// `daytime_availability` inside the daytime window and 1 outside it.
std::vector<AvailabilityProfile> availability_profile(const FleetConfig& fleet, FleetMode mode,
                                                      int n_days = kDaysPerYear);

struct FleetExperimentRow {
    int n_ev = 0;
    double mean_daytime_availability = 0.0;
    double mean_daily_min_availability = 0.0;
};

/// For each fleet size, the share of the fleet at home during daytime hours,
/// averaged over days, and the per-day minimum of that share, averaged over
/// days. Vehicle k's trips are the same across fleet sizes.
std::vector<FleetExperimentRow> min_availability_experiment(const std::vector<int>& n_ev_range, int n_days,
                                                            std::uint64_t seed, int trips_per_day = 3);

/// Driving energy drawn from a single vehicle's battery at each trip hour.
std::vector<double> driving_draw(const TripSchedule& schedule);

/// Pooled fleet: total daily driving energy spread evenly over the daytime window.
std::vector<double> driving_draw_pooled(const FleetConfig& fleet, int n_days = kDaysPerYear);

/// Annual per-vehicle distance implied by the trip model.
double annual_driving_km(const FleetConfig& fleet);

}  // namespace solarev
