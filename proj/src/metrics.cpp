#include "solarev/metrics.hpp"

namespace solarev {

void EmissionFactors::validate() const {
    if (!(grid_kg_per_kwh >= 0.0) || !(gasoline_kg_per_l >= 0.0))
        throw InputError("emission factors must be >= 0");
}

EnergyIndices energy_indices(const DispatchResult& d) {
    if (!(d.e_load > 0.0)) throw InputError("energy indices undefined for zero load");
    const double on_site = d.e_pv_to_load + d.e_batt_to_load;
    EnergyIndices out;
    out.es_pct = d.e_pv / d.e_load * 100.0;
    out.ss_pct = on_site / d.e_load * 100.0;
    out.sc_pct = d.e_pv > 0.0 ? on_site / d.e_pv * 100.0 : 100.0;
    return out;
}

double cost_saving(const FinancialSummary& summary, double annual_base_cost, int project_years) {
    if (!(annual_base_cost > 0.0)) throw InputError("cost saving undefined for zero base cost");
    if (project_years < 1) throw InputError("project years must be >= 1");
    return summary.npv_total / project_years / annual_base_cost * 100.0;
}

Co2Result co2(const DispatchResult& dispatch_base, const DispatchResult& dispatch_system,
              const EmissionFactors& factors, const TransportParams& transport, bool include_gasoline) {
    factors.validate();
    Co2Result out;
    out.emi_base_kg = factors.grid_kg_per_kwh * dispatch_base.e_import;
    if (include_gasoline) out.emi_base_kg += transport.annual_gasoline_litres() * factors.gasoline_kg_per_l;
    if (!(out.emi_base_kg > 0.0)) throw InputError("CO2 reduction undefined for zero base emissions");
    out.emi_system_kg = factors.grid_kg_per_kwh * dispatch_system.e_import;
    out.reduction_pct = (1.0 - out.emi_system_kg / out.emi_base_kg) * 100.0;
    return out;
}

}  // namespace solarev
