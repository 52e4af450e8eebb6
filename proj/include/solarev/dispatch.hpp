#pragma once

#include <optional>
#include <span>
#include <vector>

#include "solarev/profiles.hpp"
#include "solarev/pv_model.hpp"

namespace solarev {

enum class StorageKind { none, stationary, ev_individual, ev_pooled };

const char* to_string(StorageKind kind);

struct Degradation {
    double calendar_rate = 0.01;   // fraction of health lost per year
    double cycle_rate = 0.00005;   // fraction lost per full-equivalent cycle

    bool operator==(const Degradation&) const = default;
};

struct StorageConfig {
    StorageKind kind = StorageKind::none;
    double nominal_kwh = 0.0;
    /// Energy kept back from home use. EVs: the driving reserve. Stationary: 0.
    double soc_floor_kwh = 0.0;
    double charge_efficiency = 0.95;
    double discharge_efficiency = 0.95;
    std::optional<double> power_limit_kw;
    /// Hourly plugged-in share in [0, 1]; empty means always available.
    std::vector<double> availability;
    /// EV kinds: hourly energy drawn from the battery by driving; empty means none.
    std::vector<double> driving_kwh;
    Degradation degradation;
    double replacement_threshold = 0.8;

    bool is_ev() const { return kind == StorageKind::ev_individual || kind == StorageKind::ev_pooled; }
    bool has_storage() const { return kind != StorageKind::none && nominal_kwh > 0.0; }
    /// Throws InputError when the configuration cannot be simulated over `hours`.
    void validate(std::size_t hours) const;
};

struct Tariff {
    double import_price = 0.0;  // $/kWh
    double export_price = 0.0;  // $/kWh, 0 without a feed-in tariff

    void validate() const;
    bool operator==(const Tariff&) const = default;
};

struct HourlyTrace {
    std::vector<double> load, pv, pv_to_load, pv_to_batt, batt_to_load, grid_to_batt, import, export_, driving,
        losses, soc;
};

struct DispatchResult {
    double e_load = 0.0;
    double e_pv = 0.0;
    double e_import = 0.0;  // includes e_grid_to_batt
    double e_export = 0.0;
    double e_pv_to_load = 0.0;
    double e_batt_to_load = 0.0;
    double e_pv_to_batt = 0.0;
    double e_grid_to_batt = 0.0;  // EV midnight top-up
    double e_driving = 0.0;
    double e_losses = 0.0;
    double soc_start_kwh = 0.0;
    double soc_end_kwh = 0.0;
    double throughput_kwh = 0.0;  // energy removed from storage (home use + driving)
    double energy_cost = 0.0;     // imports billed minus exports credited
    double health = 1.0;
    bool replacement_occurred = false;
    std::optional<HourlyTrace> trace;
};

struct DispatchOptions {
    bool record_trace = false;
    /// Defaults to the storage floor.
    std::optional<double> initial_soc_kwh;
};

/// Greedy self-consumption dispatch over `demand.size()` hours (index 0 is
/// midnight). Per hour: PV serves load; surplus charges the plugged-in share
/// of the storage, the rest is exported; deficit is met from the plugged-in
/// share above the floor, the rest is imported. EVs first drive (drawing the
/// battery, possibly below the floor) and at midnight are topped up to the
/// floor, from leftover PV first and then from the grid.
DispatchResult simulate_year(std::span<const double> demand, std::span<const double> pv,
                             const StorageConfig& storage, const Tariff& tariff, double health,
                             const DispatchOptions& options = {});

DispatchResult simulate_year(const HourlyProfile& demand, const HourlyProfile& pv, const StorageConfig& storage,
                             const Tariff& tariff, double health, const DispatchOptions& options = {});

struct ProjectParams {
    int years = 25;
    int start_year = 2020;
};

struct ProjectDispatch {
    std::vector<DispatchResult> years;
    /// 1-based project years that start with a fresh battery.
    std::vector<int> replacement_years;
};

/// Health after one year of operation.
double next_health(double health, const Degradation& degradation, double throughput_kwh, double nominal_kwh);

/// Runs consecutive years with PV degradation, carried-over state of charge,
/// and battery replacement whenever health ends a year below the threshold.
ProjectDispatch simulate_project(std::span<const double> demand, std::span<const double> pv_cf,
                                 const PvConfig& pv, const StorageConfig& storage, const Tariff& tariff,
                                 const ProjectParams& params, bool record_trace = false);

ProjectDispatch simulate_project(const HourlyProfile& demand, const HourlyProfile& pv_cf, const PvConfig& pv,
                                 const StorageConfig& storage, const Tariff& tariff, const ProjectParams& params);

}  // namespace solarev
