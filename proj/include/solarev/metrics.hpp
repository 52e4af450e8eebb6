#pragma once

#include "solarev/dispatch.hpp"
#include "solarev/finance.hpp"

namespace solarev {

struct EmissionFactors {
    double grid_kg_per_kwh = 0.522;
    double gasoline_kg_per_l = 2.3;

    void validate() const;
    bool operator==(const EmissionFactors&) const = default;
};

struct EnergyIndices {
    double es_pct = 0.0;  // PV generation / load
    double ss_pct = 0.0;  // load served on site / load
    double sc_pct = 0.0;  // PV used on site / PV generation
};

struct Co2Result {
    double emi_base_kg = 0.0;
    double emi_system_kg = 0.0;
    double reduction_pct = 0.0;
};

struct MetricsRow {
    double es_pct = 0.0;
    double ss_pct = 0.0;
    double sc_pct = 0.0;
    double cs_pct = 0.0;
    double co2_reduction_pct = 0.0;
    double emi_base_kg = 0.0;
    double emi_system_kg = 0.0;
};

/// SC is taken as 100 when there is no PV generation.
EnergyIndices energy_indices(const DispatchResult& dispatch);

/// Annualized project NPV as a percentage of the baseline annual energy cost.
double cost_saving(const FinancialSummary& summary, double annual_base_cost, int project_years);

/// Baseline emissions from grid imports (plus gasoline for the vehicles an EV
/// scenario replaces) against system emissions from grid imports.
Co2Result co2(const DispatchResult& dispatch_base, const DispatchResult& dispatch_system,
              const EmissionFactors& factors, const TransportParams& transport, bool include_gasoline);

}  // namespace solarev
