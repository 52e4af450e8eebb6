#include "solarev/finance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace solarev {

namespace {

constexpr double kIrrLow = -0.99;
constexpr double kIrrHigh = 10.0;
constexpr double kIrrScanStep = 0.001;

double npv_at(std::span<const double> flows, double capex, double rate) {
    return present_value(flows, rate) - capex;
}

}  // namespace

const char* to_string(Technology tech) {
    return tech == Technology::pv_plus_ev ? "pv_plus_ev" : "pv_plus_battery";
}

const char* to_string(ReplacementCost mode) {
    return mode == ReplacementCost::fixed ? "fixed" : "battery_trajectory";
}

void TechnologyCostSchedule::validate() const {
    for (double c : {pv_cost_0, battery_cost_0, ev_add_cost_0})
        if (!(c >= 0.0)) throw InputError("technology costs must be >= 0");
    for (double r : {pv_rate, battery_rate, ev_add_rate})
        if (!(r > 0.0 && r <= 1.0)) throw InputError("annual cost rates must be in (0, 1]");
    if (m_pv_per_kw && !(*m_pv_per_kw >= 0.0)) throw InputError("costs.m_pv_per_kw must be >= 0");
    if (!(m_pv_capex_fraction >= 0.0)) throw InputError("costs.m_pv_capex_fraction must be >= 0");
    if (r_battery_fixed && !(*r_battery_fixed >= 0.0)) throw InputError("costs.r_battery_fixed must be >= 0");
}

double TechnologyCostSchedule::replacement_per_kwh(int calendar_year) const {
    if (r_battery_mode == ReplacementCost::fixed) return r_battery_fixed.value_or(battery_cost_0);
    return cost_at_year(*this, CostComponent::battery, calendar_year);
}

double TechnologyCostSchedule::maintenance_per_kw(int start_year) const {
    if (m_pv_per_kw) return *m_pv_per_kw;
    return m_pv_capex_fraction * cost_at_year(*this, CostComponent::pv, start_year);
}

void TransportParams::validate() const {
    if (n_vehicles < 0) throw InputError("transport.n_vehicles must be >= 0");
    for (double v : {annual_km, gasoline_km_per_l, gasoline_price, gasoline_co2_kg_per_l, ev_battery_kwh, ev_km_per_kwh})
        if (!(v > 0.0)) throw InputError("transport parameters must be > 0");
}

void FinanceParams::validate() const {
    if (!(discount_rate > -1.0)) throw InputError("finance.discount_rate must be > -1");
    if (project_years < 1) throw InputError("finance.project_years must be >= 1");
}

double cost_at_year(const TechnologyCostSchedule& schedule, CostComponent component, int year) {
    if (year < schedule.base_year)
        throw InputError(fmt::format("year {} precedes cost base year {}", year, schedule.base_year));
    const int n = year - schedule.base_year;
    switch (component) {
        case CostComponent::pv: return schedule.pv_cost_0 * std::pow(schedule.pv_rate, n);
        case CostComponent::battery: return schedule.battery_cost_0 * std::pow(schedule.battery_rate, n);
        case CostComponent::ev_add: return schedule.ev_add_cost_0 * std::pow(schedule.ev_add_rate, n);
    }
    return 0.0;
}

double system_cost(double p_kw, double b_kwh, int year, const TechnologyCostSchedule& schedule, Technology tech,
                   double v2h_fraction) {
    if (!(p_kw >= 0.0 && b_kwh >= 0.0)) throw InputError("capacities must be >= 0");
    double cost = p_kw * cost_at_year(schedule, CostComponent::pv, year);
    if (b_kwh > 0.0) {
        if (tech == Technology::pv_plus_ev) {
            if (!(v2h_fraction > 0.0)) throw InputError("v2h fraction must be > 0");
            cost += b_kwh / v2h_fraction * cost_at_year(schedule, CostComponent::ev_add, year);
        } else {
            cost += b_kwh * cost_at_year(schedule, CostComponent::battery, year);
        }
    }
    return cost;
}

double annual_electricity_cost(const DispatchResult& dispatch, const Tariff& tariff, double p_kw, double b_kwh,
                               const TechnologyCostSchedule& schedule, int project_start_year, int calendar_year,
                               bool replacement_this_year) {
    double cost = dispatch.e_import * tariff.import_price - dispatch.e_export * tariff.export_price;
    cost += p_kw * schedule.maintenance_per_kw(project_start_year);
    if (replacement_this_year) cost += b_kwh * schedule.replacement_per_kwh(calendar_year);
    return cost;
}

double annuity_factor(double rate, int years) {
    double sum = 0.0, df = 1.0;
    for (int n = 1; n <= years; ++n) {
        df /= 1.0 + rate;
        sum += df;
    }
    return sum;
}

double present_value(std::span<const double> flows, double rate) {
    double sum = 0.0, df = 1.0;
    for (double f : flows) {
        df /= 1.0 + rate;
        sum += f * df;
    }
    return sum;
}

double npv_electricity(std::span<const double> base_costs, std::span<const double> system_costs, double capex,
                       const FinanceParams& params) {
    params.validate();
    if (base_costs.size() != system_costs.size()) throw InputError("cost sequences differ in length");
    std::vector<double> flows(base_costs.size());
    for (std::size_t n = 0; n < flows.size(); ++n) flows[n] = base_costs[n] - system_costs[n];
    return present_value(flows, params.discount_rate) - capex;
}

double npv_gasoline(const TransportParams& transport, const FinanceParams& params) {
    params.validate();
    if (transport.n_vehicles == 0) return 0.0;
    transport.validate();
    return transport.annual_gasoline_litres() * transport.gasoline_price *
           annuity_factor(params.discount_rate, params.project_years);
}

std::optional<double> irr(std::span<const double> flows, double capex) {
    const double tolerance = 1e-6 * std::max(std::abs(capex), 1e-12);
    double lo = kIrrLow;
    double f_lo = npv_at(flows, capex, lo);
    if (f_lo == 0.0) return lo;
    const int steps = static_cast<int>(std::round((kIrrHigh - kIrrLow) / kIrrScanStep));
    for (int i = 1; i <= steps; ++i) {
        const double hi = kIrrLow + i * kIrrScanStep;
        const double f_hi = npv_at(flows, capex, hi);
        if (f_hi == 0.0) return hi;
        if ((f_lo < 0.0) != (f_hi < 0.0)) {
            double a = lo, b = hi, fa = f_lo;
            double mid = 0.5 * (a + b);
            for (int it = 0; it < 200; ++it) {
                mid = 0.5 * (a + b);
                const double fm = npv_at(flows, capex, mid);
                if (std::abs(fm) < tolerance && b - a < 1e-12) break;
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
                if (b - a <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) break;
            }
            return mid;
        }
        lo = hi;
        f_lo = f_hi;
    }
    return std::nullopt;
}

std::optional<double> spb(std::span<const double> flows, double capex) {
    if (capex <= 0.0) return 0.0;
    double cumulative = 0.0;
    for (std::size_t n = 0; n < flows.size(); ++n) {
        const double before = cumulative;
        cumulative += flows[n];
        if (cumulative >= capex && flows[n] > 0.0)
            return static_cast<double>(n) + (capex - before) / flows[n];
    }
    return std::nullopt;
}

FinancialSummary summarize(std::vector<double> base_costs, std::vector<double> system_costs,
                           std::span<const double> gasoline_flows, double capex, const FinanceParams& params) {
    params.validate();
    const std::size_t n = base_costs.size();
    if (system_costs.size() != n || (!gasoline_flows.empty() && gasoline_flows.size() != n))
        throw InputError("cash-flow sequences differ in length");
    FinancialSummary s;
    s.capex = capex;
    s.npv_electricity = npv_electricity(base_costs, system_costs, capex, params);
    s.cash_flows.resize(n);
    std::vector<double> gas(n, 0.0);
    if (!gasoline_flows.empty()) gas.assign(gasoline_flows.begin(), gasoline_flows.end());
    s.npv_gasoline = present_value(gas, params.discount_rate);
    for (std::size_t i = 0; i < n; ++i) s.cash_flows[i] = base_costs[i] - system_costs[i] + gas[i];
    s.npv_total = s.npv_electricity + s.npv_gasoline;
    s.irr = irr(s.cash_flows, capex);
    s.spb_years = spb(s.cash_flows, capex);
    s.base_costs = std::move(base_costs);
    s.system_costs = std::move(system_costs);
    return s;
}

}  // namespace solarev
