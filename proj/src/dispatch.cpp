#include "solarev/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace solarev {

const char* to_string(StorageKind kind) {
    switch (kind) {
        case StorageKind::none: return "none";
        case StorageKind::stationary: return "stationary";
        case StorageKind::ev_individual: return "ev_individual";
        case StorageKind::ev_pooled: return "ev_pooled";
    }
    return "?";
}

void StorageConfig::validate(std::size_t hours) const {
    if (!(nominal_kwh >= 0.0)) throw InputError("storage nominal capacity must be >= 0");
    if (!(soc_floor_kwh >= 0.0) || soc_floor_kwh > nominal_kwh)
        throw InputError(fmt::format("storage accessible capacity negative: floor {} kWh above nominal {} kWh",
                                     soc_floor_kwh, nominal_kwh));
    if (!(charge_efficiency > 0.0 && charge_efficiency <= 1.0) ||
        !(discharge_efficiency > 0.0 && discharge_efficiency <= 1.0))
        throw InputError("storage efficiencies must be in (0, 1]");
    if (power_limit_kw && !(*power_limit_kw >= 0.0)) throw InputError("storage power limit must be >= 0");
    if (!(replacement_threshold > 0.0 && replacement_threshold < 1.0))
        throw InputError("storage replacement threshold must be in (0, 1)");
    if (!(degradation.calendar_rate >= 0.0 && degradation.cycle_rate >= 0.0))
        throw InputError("storage degradation rates must be >= 0");
    if (!availability.empty()) {
        if (availability.size() != hours) throw InputError("availability length does not match demand");
        for (double a : availability)
            if (!(a >= 0.0 && a <= 1.0)) throw InputError("availability values must be in [0, 1]");
    }
    if (!driving_kwh.empty()) {
        if (!is_ev()) throw InputError("driving draw given for non-EV storage");
        if (driving_kwh.size() != hours) throw InputError("driving draw length does not match demand");
        for (std::size_t day = 0; day * kHoursPerDay < hours; ++day) {
            double daily = 0.0;
            for (std::size_t h = day * kHoursPerDay; h < std::min(hours, (day + 1) * kHoursPerDay); ++h) {
                if (!(driving_kwh[h] >= 0.0)) throw InputError("driving draw must be >= 0");
                daily += driving_kwh[h];
            }
            if (daily > soc_floor_kwh + 1e-9)
                throw InputError(fmt::format("day {}: driving {} kWh exceeds the driving reserve {} kWh", day, daily,
                                             soc_floor_kwh));
        }
    }
}

void Tariff::validate() const {
    if (!(import_price >= 0.0)) throw InputError("tariff.import_price must be >= 0");
    if (!(export_price >= 0.0)) throw InputError("tariff.export_price must be >= 0");
}

DispatchResult simulate_year(std::span<const double> demand, std::span<const double> pv,
                             const StorageConfig& storage, const Tariff& tariff, double health,
                             const DispatchOptions& options) {
    const std::size_t hours = demand.size();
    if (pv.size() != hours) throw InputError("demand and pv lengths differ");
    if (!(health > 0.0 && health <= 1.0)) throw InputError("storage health must be in (0, 1]");
    storage.validate(hours);
    tariff.validate();

    const bool active = storage.has_storage();
    const bool ev = active && storage.is_ev();
    const double capacity = active ? health * storage.nominal_kwh : 0.0;
    const double floor = active ? storage.soc_floor_kwh : 0.0;
    const double eta_c = storage.charge_efficiency;
    const double eta_d = storage.discharge_efficiency;
    const double limit = storage.power_limit_kw.value_or(std::numeric_limits<double>::infinity());

    DispatchResult r;
    r.health = health;
    double soc = active ? options.initial_soc_kwh.value_or(floor) : 0.0;
    r.soc_start_kwh = soc;

    if (options.record_trace) {
        r.trace.emplace();
        for (auto* v : {&r.trace->load, &r.trace->pv, &r.trace->pv_to_load, &r.trace->pv_to_batt,
                        &r.trace->batt_to_load, &r.trace->grid_to_batt, &r.trace->import, &r.trace->export_,
                        &r.trace->driving, &r.trace->losses, &r.trace->soc})
            v->assign(hours, 0.0);
    }

    for (std::size_t h = 0; h < hours; ++h) {
        const double load = demand[h];
        const double gen = pv[h];
        double grid_to_batt = 0.0, drive = 0.0, loss = 0.0, pv_to_batt = 0.0, released = 0.0,
               batt_to_load = 0.0;

        if (ev && !storage.driving_kwh.empty()) {
            // A worn pack can hold less than the reserve; trips cannot draw it below empty.
            drive = std::min(storage.driving_kwh[h], std::max(0.0, soc));
            soc -= drive;
        }

        const double direct = std::min(load, gen);
        const double surplus = gen - direct;
        const double deficit = load - direct;
        const double plugged = storage.availability.empty() ? 1.0 : storage.availability[h];

        if (active && surplus > 0.0) {
            // Headroom of the plugged-in share, assuming a uniform state of charge across the pack.
            const double room = std::max(0.0, plugged * (capacity - soc));
            const double into = std::min({surplus * eta_c, room, limit * eta_c});
            pv_to_batt = into / eta_c;
            loss += pv_to_batt - into;
            soc += into;
        }
        // Midnight top-up to the driving reserve: leftover PV first, then the grid.
        const double target = std::min(floor, capacity);
        if (ev && hour_of_day(h) == 0 && soc < target) {
            const double from_pv = std::min(target - soc, (surplus - pv_to_batt) * eta_c);
            if (from_pv > 0.0) {
                pv_to_batt += from_pv / eta_c;
                loss += from_pv / eta_c - from_pv;
                soc += from_pv;
            }
            if (soc < target) {
                const double need = target - soc;
                grid_to_batt = need / eta_c;
                loss += grid_to_batt - need;
                soc = target;
            }
        }
        if (active && deficit > 0.0) {
            const double available = std::max(0.0, plugged * (soc - floor));
            batt_to_load = std::min({deficit, available * eta_d, limit});
            released = batt_to_load / eta_d;
            loss += released - batt_to_load;
            soc -= released;
        }

        const double exported = surplus - pv_to_batt;
        const double imported = deficit - batt_to_load + grid_to_batt;

        r.e_load += load;
        r.e_pv += gen;
        r.e_pv_to_load += direct;
        r.e_pv_to_batt += pv_to_batt;
        r.e_batt_to_load += batt_to_load;
        r.e_grid_to_batt += grid_to_batt;
        r.e_import += imported;
        r.e_export += exported;
        r.e_driving += drive;
        r.e_losses += loss;
        r.throughput_kwh += released + drive;

        if (r.trace) {
            auto& t = *r.trace;
            t.load[h] = load;
            t.pv[h] = gen;
            t.pv_to_load[h] = direct;
            t.pv_to_batt[h] = pv_to_batt;
            t.batt_to_load[h] = batt_to_load;
            t.grid_to_batt[h] = grid_to_batt;
            t.import[h] = imported;
            t.export_[h] = exported;
            t.driving[h] = drive;
            t.losses[h] = loss;
            t.soc[h] = soc;
        }
    }
    r.soc_end_kwh = soc;
    r.energy_cost = r.e_import * tariff.import_price - r.e_export * tariff.export_price;
    return r;
}

DispatchResult simulate_year(const HourlyProfile& demand, const HourlyProfile& pv, const StorageConfig& storage,
                             const Tariff& tariff, double health, const DispatchOptions& options) {
    const auto d = demand.dense();
    const auto g = pv.dense();
    return simulate_year(d, g, storage, tariff, health, options);
}

double next_health(double health, const Degradation& degradation, double throughput_kwh, double nominal_kwh) {
    const double cycles = nominal_kwh > 0.0 ? throughput_kwh / nominal_kwh : 0.0;
    return std::max(0.0, health * (1.0 - degradation.calendar_rate - degradation.cycle_rate * cycles));
}

ProjectDispatch simulate_project(std::span<const double> demand, std::span<const double> pv_cf, const PvConfig& pv,
                                 const StorageConfig& storage, const Tariff& tariff, const ProjectParams& params,
                                 bool record_trace) {
    if (params.years < 1) throw InputError("project must last at least one year");
    pv.validate();
    if (pv_cf.size() != demand.size()) throw InputError("demand and capacity-factor lengths differ");

    ProjectDispatch out;
    out.years.reserve(static_cast<std::size_t>(params.years));
    std::vector<double> gen(pv_cf.size());
    double health = 1.0;
    std::optional<double> soc;
    bool fresh = false;
    for (int n = 1; n <= params.years; ++n) {
        const double k = pv.capacity_kw * degradation_factor(pv.annual_degradation, n - 1);
        std::transform(pv_cf.begin(), pv_cf.end(), gen.begin(), [k](double cf) { return cf * k; });
        DispatchOptions options{record_trace, soc};
        auto year = simulate_year(demand, gen, storage, tariff, health, options);
        year.replacement_occurred = fresh;
        fresh = false;

        if (storage.has_storage()) {
            health = next_health(health, storage.degradation, year.throughput_kwh, storage.nominal_kwh);
            if (health < storage.replacement_threshold && n < params.years) {
                health = 1.0;
                fresh = true;
                out.replacement_years.push_back(n + 1);
            }
            health = std::max(health, 1e-9);
            soc = std::min(year.soc_end_kwh, std::max(health * storage.nominal_kwh, storage.soc_floor_kwh));
        }
        out.years.push_back(std::move(year));
    }
    return out;
}

ProjectDispatch simulate_project(const HourlyProfile& demand, const HourlyProfile& pv_cf, const PvConfig& pv,
                                 const StorageConfig& storage, const Tariff& tariff, const ProjectParams& params) {
    const auto d = demand.dense();
    const auto cf = pv_cf.dense();
    return simulate_project(d, cf, pv, storage, tariff, params);
}

}  // namespace solarev
