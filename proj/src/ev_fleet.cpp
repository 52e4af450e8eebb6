#include "solarev/ev_fleet.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "solarev/rng.hpp"

namespace solarev {

void FleetConfig::validate() const {
    if (n_ev < 0) throw InputError("fleet.n_ev must be >= 0");
    if (!(battery_kwh_per_ev > 0.0)) throw InputError("fleet.battery_kwh_per_ev must be > 0");
    if (!(v2h_fraction >= 0.0 && v2h_fraction <= 1.0)) throw InputError("fleet.v2h_fraction must be in [0, 1]");
    if (!(daytime_availability >= 0.0 && daytime_availability <= 1.0))
        throw InputError("fleet.daytime_availability must be in [0, 1]");
    if (daytime_start < 0 || daytime_end > 24 || daytime_start >= daytime_end)
        throw InputError("fleet daytime window must satisfy 0 <= start < end <= 24");
    if (trips_per_day < 0 || trips_per_day > window_hours())
        throw InputError(fmt::format("fleet.trips_per_day must be in [0, {}]", window_hours()));
    if (!(energy_per_trip_kwh >= 0.0)) throw InputError("fleet.energy_per_trip_kwh must be >= 0");
    if (!(km_per_trip >= 0.0)) throw InputError("fleet.km_per_trip must be >= 0");
}

TripSchedule sample_trips(std::uint64_t seed, int n_days, int trips_per_day, int window_start, int window_end,
                          double energy_per_trip_kwh) {
    const int window = window_end - window_start;
    if (window <= 0) throw InputError("empty trip window");
    if (trips_per_day < 0 || trips_per_day > window)
        throw InputError(fmt::format("trips_per_day {} exceeds the {}-hour window", trips_per_day, window));
    if (n_days < 0) throw InputError("n_days must be >= 0");

    TripSchedule schedule;
    schedule.trips_per_day = trips_per_day;
    schedule.energy_per_trip_kwh = energy_per_trip_kwh;
    schedule.hours_by_day.reserve(static_cast<std::size_t>(n_days));

    Rng rng(seed);
    std::vector<int> hours(static_cast<std::size_t>(window));
    for (int d = 0; d < n_days; ++d) {
        std::iota(hours.begin(), hours.end(), window_start);
        // Partial Fisher-Yates: the first trips_per_day slots are a uniform draw without replacement.
        for (int i = 0; i < trips_per_day; ++i) {
            const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(window - i)));
            std::swap(hours[i], hours[j]);
        }
        std::vector<int> day(hours.begin(), hours.begin() + trips_per_day);
        std::sort(day.begin(), day.end());
        schedule.hours_by_day.push_back(std::move(day));
    }
    return schedule;
}

TripSchedule vehicle_schedule(const FleetConfig& fleet, int vehicle_id, int n_days) {
    return sample_trips(derive_seed(fleet.seed, static_cast<std::uint64_t>(vehicle_id)), n_days,
                        fleet.trips_per_day, fleet.daytime_start, fleet.daytime_end, fleet.energy_per_trip_kwh);
}

AvailabilityProfile availability_from_schedule(const TripSchedule& schedule) {
    AvailabilityProfile out{std::vector<double>(schedule.n_days() * kHoursPerDay, 1.0)};
    for (std::size_t d = 0; d < schedule.n_days(); ++d)
        for (int h : schedule.hours_by_day[d]) out.values[d * kHoursPerDay + static_cast<std::size_t>(h)] = 0.0;
    return out;
}

std::vector<AvailabilityProfile> availability_profile(const FleetConfig& fleet, FleetMode mode, int n_days) {
    fleet.validate();
    if (fleet.n_ev < 1) throw InputError("availability profile needs at least one vehicle");
    if (mode == FleetMode::pooled) {
        AvailabilityProfile pooled{std::vector<double>(static_cast<std::size_t>(n_days) * kHoursPerDay, 1.0)};
        for (std::size_t i = 0; i < pooled.values.size(); ++i) {
            const auto h = static_cast<int>(hour_of_day(i));
            if (h >= fleet.daytime_start && h < fleet.daytime_end) pooled.values[i] = fleet.daytime_availability;
        }
        return {std::move(pooled)};
    }
    std::vector<AvailabilityProfile> out;
    out.reserve(static_cast<std::size_t>(fleet.n_ev));
    for (int v = 0; v < fleet.n_ev; ++v) out.push_back(availability_from_schedule(vehicle_schedule(fleet, v, n_days)));
    return out;
}

std::vector<FleetExperimentRow> min_availability_experiment(const std::vector<int>& n_ev_range, int n_days,
                                                            std::uint64_t seed, int trips_per_day) {
    if (n_days < 1) throw InputError("fleet experiment needs at least one day");
    FleetConfig fleet;
    fleet.seed = seed;
    fleet.trips_per_day = trips_per_day;
    fleet.validate();
    const int window = fleet.window_hours();
    for (int n : n_ev_range)
        if (n < 1) throw InputError("fleet sizes must be >= 1");
    const int largest = n_ev_range.empty() ? 0 : *std::max_element(n_ev_range.begin(), n_ev_range.end());

    // away[d][h] for the first k vehicles is accumulated once, in vehicle order.
    std::vector<int> away(static_cast<std::size_t>(n_days) * static_cast<std::size_t>(window), 0);
    std::vector<FleetExperimentRow> by_size(static_cast<std::size_t>(largest) + 1);
    for (int v = 0; v < largest; ++v) {
        const auto schedule = vehicle_schedule(fleet, v, n_days);
        for (int d = 0; d < n_days; ++d)
            for (int h : schedule.hours_by_day[static_cast<std::size_t>(d)])
                ++away[static_cast<std::size_t>(d * window + h - fleet.daytime_start)];
        const int n = v + 1;
        double mean_sum = 0.0, min_sum = 0.0;
        for (int d = 0; d < n_days; ++d) {
            int most_away = 0, total_away = 0;
            for (int h = 0; h < window; ++h) {
                const int a = away[static_cast<std::size_t>(d * window + h)];
                most_away = std::max(most_away, a);
                total_away += a;
            }
            mean_sum += 1.0 - static_cast<double>(total_away) / (static_cast<double>(n) * window);
            min_sum += 1.0 - static_cast<double>(most_away) / n;
        }
        by_size[static_cast<std::size_t>(n)] = {n, mean_sum / n_days, min_sum / n_days};
    }
    std::vector<FleetExperimentRow> rows;
    for (int n : n_ev_range) rows.push_back(by_size[static_cast<std::size_t>(n)]);
    return rows;
}

std::vector<double> driving_draw(const TripSchedule& schedule) {
    std::vector<double> out(schedule.n_days() * kHoursPerDay, 0.0);
    for (std::size_t d = 0; d < schedule.n_days(); ++d)
        for (int h : schedule.hours_by_day[d])
            out[d * kHoursPerDay + static_cast<std::size_t>(h)] = schedule.energy_per_trip_kwh;
    return out;
}

std::vector<double> driving_draw_pooled(const FleetConfig& fleet, int n_days) {
    fleet.validate();
    const double per_hour = fleet.n_ev * fleet.trips_per_day * fleet.energy_per_trip_kwh / fleet.window_hours();
    std::vector<double> out(static_cast<std::size_t>(n_days) * kHoursPerDay, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto h = static_cast<int>(hour_of_day(i));
        if (h >= fleet.daytime_start && h < fleet.daytime_end) out[i] = per_hour;
    }
    return out;
}

double annual_driving_km(const FleetConfig& fleet) {
    return fleet.trips_per_day * fleet.km_per_trip * static_cast<double>(kDaysPerYear);
}

}  // namespace solarev
