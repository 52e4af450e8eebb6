#pragma once

#include <optional>
#include <span>
#include <vector>

#include "solarev/dispatch.hpp"

namespace solarev {

enum class CostComponent { pv, battery, ev_add };

enum class Technology { pv_plus_battery, pv_plus_ev };

/// Source of R_battery: the battery cost in the replacement year, or a constant.
enum class ReplacementCost { battery_trajectory, fixed };

const char* to_string(Technology tech);
const char* to_string(ReplacementCost mode);

/// Base-year unit costs with constant multiplicative annual decline.
struct TechnologyCostSchedule {
    double pv_cost_0 = 2200.0;       // $/kW
    double battery_cost_0 = 1182.0;  // $/kWh
    double ev_add_cost_0 = 200.0;    // $/kWh of EV battery
    double pv_rate = 0.925;
    double battery_rate = 0.94;
    double ev_add_rate = 0.81;
    int base_year = 2020;
    /// PV maintenance per kW-year; when unset, a share of the project-year PV cost.
    std::optional<double> m_pv_per_kw;
    double m_pv_capex_fraction = 0.01;
    ReplacementCost r_battery_mode = ReplacementCost::battery_trajectory;
    /// $/kWh used in fixed mode; defaults to battery_cost_0.
    std::optional<double> r_battery_fixed;

    void validate() const;
    /// $/kW-yr of PV maintenance for a project that starts in `start_year`.
    double maintenance_per_kw(int start_year) const;
    /// R_battery in $/kWh for a replacement in `calendar_year`.
    double replacement_per_kwh(int calendar_year) const;
    bool operator==(const TechnologyCostSchedule&) const = default;
};

struct TransportParams {
    int n_vehicles = 1;
    double annual_km = 6368.0;
    double gasoline_km_per_l = 12.6;
    double gasoline_price = 1.29;         // $/l
    double gasoline_co2_kg_per_l = 2.3;
    double ev_battery_kwh = 40.0;
    double ev_km_per_kwh = 5.3;

    void validate() const;
    double annual_gasoline_litres() const { return n_vehicles * annual_km / gasoline_km_per_l; }
    bool operator==(const TransportParams&) const = default;
};

struct FinanceParams {
    double discount_rate = 0.03;
    int project_years = 25;
    int project_start_year = 2020;

    void validate() const;
    bool operator==(const FinanceParams&) const = default;
};

struct FinancialSummary {
    double npv_total = 0.0;
    double npv_electricity = 0.0;
    double npv_gasoline = 0.0;
    std::optional<double> irr;
    std::optional<double> spb_years;
    double capex = 0.0;
    /// Total net cash flow F_n (electricity saving + gasoline saving) for n = 1..N.
    std::vector<double> cash_flows;
    std::vector<double> base_costs;
    std::vector<double> system_costs;
};

/// cost_0 * rate^(year - base_year), in $/kW (pv) or $/kWh (battery, ev_add).
double cost_at_year(const TechnologyCostSchedule& schedule, CostComponent component, int year);

/// Up-front cost p*C_pv(t) + b*C_storage(t). For PV+EV, `b` is the V2H-usable
/// capacity and the EV premium applies to the whole battery, b / v2h_fraction.
double system_cost(double p_kw, double b_kwh, int year, const TechnologyCostSchedule& schedule,
                   Technology tech = Technology::pv_plus_battery, double v2h_fraction = 0.5);

/// One year's electricity bill with the system: imports, export credit, PV
/// maintenance, and b*R_battery(year) when the battery is replaced that year.
/// `b_kwh` is the replaced capacity; for an EV that is the whole pack.
double annual_electricity_cost(const DispatchResult& dispatch, const Tariff& tariff, double p_kw, double b_kwh,
                               const TechnologyCostSchedule& schedule, int project_start_year, int calendar_year,
                               bool replacement_this_year);

/// Sum over n = 1..N of 1/(1+r)^n.
double annuity_factor(double rate, int years);

/// Present value at n = 0 of flows received at n = 1..N.
double present_value(std::span<const double> flows, double rate);

double npv_electricity(std::span<const double> base_costs, std::span<const double> system_costs, double capex,
                       const FinanceParams& params);

/// Discounted gasoline spending avoided by replacing ICE vehicles.
double npv_gasoline(const TransportParams& transport, const FinanceParams& params);

/// Smallest rate in (-0.99, 10) at which -capex + sum F_n/(1+d)^n = 0, or none.
std::optional<double> irr(std::span<const double> flows, double capex);

/// Years until cumulative undiscounted flows cover capex, interpolated within
/// the paying year; none if not repaid within the flows given.
std::optional<double> spb(std::span<const double> flows, double capex);

/// Assembles the summary from per-year costs. `gasoline_flows` may be empty.
FinancialSummary summarize(std::vector<double> base_costs, std::vector<double> system_costs,
                           std::span<const double> gasoline_flows, double capex, const FinanceParams& params);

}  // namespace solarev
