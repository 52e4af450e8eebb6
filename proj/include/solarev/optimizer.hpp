#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "solarev/dispatch.hpp"
#include "solarev/ev_fleet.hpp"
#include "solarev/finance.hpp"
#include "solarev/metrics.hpp"

namespace solarev {

enum class AnalysisMode { individual, aggregated };
enum class FixtureKind { residential, commercial };
/// How a single house sees its own EV: its sampled trips, or the fleet-average profile.
enum class IndividualAvailability { sampled, pooled };

const char* to_string(AnalysisMode mode);
const char* to_string(FixtureKind kind);
const char* to_string(IndividualAvailability mode);

/// Inclusive grid 0, step, 2*step, ..., max (max itself always included).
struct SweepAxis {
    double step = 1.0;
    double max = 10.0;

    std::vector<double> values() const;
    bool operator==(const SweepAxis&) const = default;
};

struct SweepGrid {
    SweepAxis pv;
    SweepAxis battery;
};

struct DistrictConfig {
    std::optional<std::filesystem::path> demand_csv;  // fixture when absent
    FixtureKind fixture_kind = FixtureKind::residential;
    int n_houses = 50;
    double fixture_annual_kwh = 5915.0;
    double max_pv_kw_per_house = 10.0;
    /// District rooftop; when set, bounds aggregated PV at `m2_per_kw`.
    std::optional<double> rooftop_m2;
    double m2_per_kw = 8.29;

    bool operator==(const DistrictConfig&) const = default;
};

struct PvSource {
    std::optional<std::filesystem::path> cf_csv;  // synthetic profile when absent
    double target_annual_cf = 0.135;
    double annual_degradation = 0.005;

    bool operator==(const PvSource&) const = default;
};

struct StorageParams {
    double charge_efficiency = 0.95;
    double discharge_efficiency = 0.95;
    std::optional<double> power_limit_kw;
    Degradation degradation;
    double replacement_threshold = 0.8;

    bool operator==(const StorageParams&) const = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    DistrictConfig district;
    PvSource pv;
    Technology technology = Technology::pv_plus_battery;
    bool fit = true;
    AnalysisMode mode = AnalysisMode::aggregated;
    std::optional<SweepAxis> grid_pv;
    std::optional<SweepAxis> grid_battery;
    FleetConfig fleet;
    bool fleet_driving = true;
    IndividualAvailability individual_availability = IndividualAvailability::sampled;
    StorageParams storage;
    Tariff tariff{0.22, 0.09};
    TechnologyCostSchedule costs;
    FinanceParams finance;
    EmissionFactors emissions;
    TransportParams transport;

    void validate() const;
    /// Export price actually paid: the tariff's, or 0 without a feed-in tariff.
    Tariff effective_tariff() const;
    /// Per-house (individual) or district (aggregated) PV limit.
    double pv_limit_kw(AnalysisMode for_mode) const;
    SweepGrid grid(AnalysisMode for_mode) const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Gap-free hourly inputs for one scenario.
struct ScenarioData {
    std::vector<std::string> house_ids;
    std::vector<std::vector<double>> demand;  // per house, kWh
    std::vector<double> cf;                   // calibrated capacity factor
};

/// One system to size: a house or the whole district.
struct Site {
    std::vector<double> demand;
    std::vector<double> cf;
    double p_max_kw = 0.0;
    int n_vehicles = 0;  // EVs in the storage fleet
    int households = 1;  // houses, each with one car in the baseline
    StorageConfig ev_storage;   // used by PV+EV
    double ev_usable_kwh = 0.0;
    double per_house_divisor = 1.0;
};

struct GridPoint {
    double p_kw = 0.0;
    double b_kwh = 0.0;
    double npv = 0.0;
};

struct SweepResult {
    double best_p_kw = 0.0;
    double best_b_kwh = 0.0;
    double best_npv = 0.0;
    std::vector<GridPoint> surface;
    FinancialSummary summary;
    MetricsRow metrics;
    ProjectDispatch dispatch;
    double per_house_divisor = 1.0;
};

/// Row of the per-year results table, in per-house units.
struct TrajectoryRow {
    int year = 0;
    double pv_kw = 0.0;
    double battery_kwh = 0.0;
    double npv = 0.0;
    double sc_pct = 0.0;
    double ss_pct = 0.0;
    double es_pct = 0.0;
    double cs_pct = 0.0;
    double co2_reduction_pct = 0.0;
    std::optional<double> spb_years;
    std::optional<double> irr;
    double pv_cost_usd_per_w = 0.0;
    double battery_cost_usd_per_kwh = 0.0;
    double ev_add_cost_usd_per_kwh = 0.0;
};

struct Trajectory {
    Technology technology = Technology::pv_plus_battery;
    bool fit = true;
    AnalysisMode mode = AnalysisMode::aggregated;
    std::vector<TrajectoryRow> rows;
};

struct ModeComparison {
    TrajectoryRow individual;
    TrajectoryRow aggregated;
    double delta_npv = 0.0;  // aggregated - individual, per house
    double delta_sc_pct = 0.0;
    double delta_ss_pct = 0.0;
    double delta_cs_pct = 0.0;
    double delta_co2_pct = 0.0;
};

/// Sites for the requested mode: one per house, or one for the summed district.
std::vector<Site> build_sites(const ScenarioConfig& config, const ScenarioData& data, AnalysisMode mode);

/// Evaluates one (p, b) configuration on a site with full financial summary and metrics.
SweepResult evaluate(const ScenarioConfig& config, const Site& site, double p_kw, double b_kwh, int year,
                     bool record_trace = false);

/// Index of the best grid point; near-equal NPVs (1e-9 relative) keep the earlier point.
std::size_t argmax_npv(const std::vector<GridPoint>& surface);

/// Exhaustive grid search for the max-NPV configuration on one site. Ties go
/// to the smallest p, then the smallest b.
SweepResult sweep_site(const ScenarioConfig& config, const Site& site, int year, const SweepGrid& grid);

/// Sweep per the scenario's mode. Individual mode returns the per-house results.
std::vector<SweepResult> sweep(const ScenarioConfig& config, const ScenarioData& data, int year);

/// Averages per-site results into a per-house row.
TrajectoryRow summarize_row(const ScenarioConfig& config, const std::vector<SweepResult>& results, int year);

Trajectory trajectory(const ScenarioConfig& config, const ScenarioData& data, const std::vector<int>& years);

ModeComparison compare_modes(const ScenarioConfig& config, const ScenarioData& data, int year);

/// Runs `fn(i)` for i in [0, n), possibly on several threads; results must be
/// written to per-index slots.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn);

}  // namespace solarev

#include "solarev/detail/parallel.hpp"
