#include "solarev/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace solarev {

namespace {

constexpr double kTieTolerance = 1e-9;

StorageConfig storage_template(const ScenarioConfig& config) {
    StorageConfig s;
    s.charge_efficiency = config.storage.charge_efficiency;
    s.discharge_efficiency = config.storage.discharge_efficiency;
    s.power_limit_kw = config.storage.power_limit_kw;
    s.degradation = config.storage.degradation;
    s.replacement_threshold = config.storage.replacement_threshold;
    return s;
}

StorageConfig ev_storage(const ScenarioConfig& config, const FleetConfig& fleet, StorageKind kind,
                         std::vector<double> availability, std::vector<double> driving) {
    StorageConfig s = storage_template(config);
    s.kind = kind;
    s.nominal_kwh = fleet.nominal_kwh();
    s.soc_floor_kwh = fleet.driving_reserve_kwh();
    s.availability = std::move(availability);
    if (config.fleet_driving) s.driving_kwh = std::move(driving);
    return s;
}

StorageConfig storage_for(const ScenarioConfig& config, const Site& site, double b_kwh) {
    if (config.technology == Technology::pv_plus_ev) return site.ev_storage;
    StorageConfig s = storage_template(config);
    if (b_kwh > 0.0) {
        s.kind = StorageKind::stationary;
        s.nominal_kwh = b_kwh;
    }
    return s;
}

TransportParams transport_for(const ScenarioConfig& config, const Site& site) {
    TransportParams t = config.transport;
    t.n_vehicles = site.n_vehicles;
    return t;
}

double annual_gasoline_cost(const ScenarioConfig& config, const Site& site) {
    if (config.technology != Technology::pv_plus_ev || site.n_vehicles == 0) return 0.0;
    const auto t = transport_for(config, site);
    return t.annual_gasoline_litres() * t.gasoline_price;
}

/// Cost-saving denominator: the site's electricity bill plus its households'
/// car fuel, whichever technology is installed.
double annual_base_cost(const ScenarioConfig& config, const Site& site, const DispatchResult& base) {
    TransportParams t = config.transport;
    t.n_vehicles = site.households;
    return base.energy_cost + t.annual_gasoline_litres() * t.gasoline_price;
}

DispatchResult base_dispatch(const ScenarioConfig& config, const Site& site) {
    const std::vector<double> no_pv(site.demand.size(), 0.0);
    return simulate_year(site.demand, no_pv, StorageConfig{}, config.effective_tariff(), 1.0);
}

struct Evaluation {
    double npv = 0.0;
    double capex = 0.0;
    std::vector<double> base_costs;
    std::vector<double> system_costs;
    std::vector<double> gasoline;
    ProjectDispatch dispatch;
};

Evaluation run(const ScenarioConfig& config, const Site& site, const DispatchResult& base, double p_kw, double b_kwh,
               int year, bool record_trace) {
    const PvConfig pv{p_kw, config.pv.annual_degradation, site.p_max_kw};
    const auto storage = storage_for(config, site, b_kwh);
    const auto tariff = config.effective_tariff();
    FinanceParams finance = config.finance;
    finance.project_start_year = year;
    const int n_years = finance.project_years;

    Evaluation e;
    try {
        e.dispatch = simulate_project(site.demand, site.cf, pv, storage, tariff, {n_years, year}, record_trace);
    } catch (const InputError& err) {
        throw InputError(fmt::format("configuration p={} kW, b={} kWh: {}", p_kw, b_kwh, err.what()));
    }
    e.base_costs.assign(static_cast<std::size_t>(n_years), base.energy_cost);
    e.system_costs.resize(static_cast<std::size_t>(n_years));
    // An EV replacement is a whole pack, not just the V2H share.
    const double replaced_kwh = storage.is_ev() ? storage.nominal_kwh : b_kwh;
    for (int n = 0; n < n_years; ++n) {
        const auto& y = e.dispatch.years[static_cast<std::size_t>(n)];
        e.system_costs[static_cast<std::size_t>(n)] = annual_electricity_cost(
            y, tariff, p_kw, replaced_kwh, config.costs, year, year + n, y.replacement_occurred);
    }
    e.capex = system_cost(p_kw, b_kwh, year, config.costs, config.technology, config.fleet.v2h_fraction);
    const double gas = annual_gasoline_cost(config, site);
    if (gas > 0.0) e.gasoline.assign(static_cast<std::size_t>(n_years), gas);

    e.npv = npv_electricity(e.base_costs, e.system_costs, e.capex, finance) +
            present_value(e.gasoline, finance.discount_rate);
    return e;
}

SweepResult finish(const ScenarioConfig& config, const Site& site, const DispatchResult& base, Evaluation e,
                   double p_kw, double b_kwh, int year) {
    FinanceParams finance = config.finance;
    finance.project_start_year = year;
    SweepResult r;
    r.best_p_kw = p_kw;
    r.best_b_kwh = b_kwh;
    r.per_house_divisor = site.per_house_divisor;
    r.summary = summarize(std::move(e.base_costs), std::move(e.system_costs), e.gasoline, e.capex, finance);
    r.best_npv = r.summary.npv_total;

    const auto& first = e.dispatch.years.front();
    if (first.e_load > 0.0) {
        const auto idx = energy_indices(first);
        r.metrics.es_pct = idx.es_pct;
        r.metrics.ss_pct = idx.ss_pct;
        r.metrics.sc_pct = idx.sc_pct;
    }
    const bool ev = config.technology == Technology::pv_plus_ev && site.n_vehicles > 0;
    const auto transport = transport_for(config, site);
    const double base_emissions = config.emissions.grid_kg_per_kwh * base.e_import +
                                  (ev ? transport.annual_gasoline_litres() * config.emissions.gasoline_kg_per_l : 0.0);
    if (base_emissions > 0.0) {
        const auto c = co2(base, first, config.emissions, transport, ev);
        r.metrics.co2_reduction_pct = c.reduction_pct;
        r.metrics.emi_base_kg = c.emi_base_kg;
        r.metrics.emi_system_kg = c.emi_system_kg;
    }
    const double base_annual = annual_base_cost(config, site, base);
    if (base_annual > 0.0) r.metrics.cs_pct = cost_saving(r.summary, base_annual, finance.project_years);
    r.dispatch = std::move(e.dispatch);
    return r;
}

double mean_of(const std::vector<SweepResult>& results, auto&& field) {
    double sum = 0.0;
    for (const auto& r : results) sum += field(r);
    return sum / static_cast<double>(results.size());
}

std::optional<double> mean_defined(const std::vector<SweepResult>& results, auto&& field) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : results) {
        if (const std::optional<double> v = field(r)) {
            sum += *v;
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / count;
}

}  // namespace

const char* to_string(AnalysisMode mode) { return mode == AnalysisMode::individual ? "individual" : "aggregated"; }
const char* to_string(FixtureKind kind) { return kind == FixtureKind::commercial ? "commercial" : "residential"; }
const char* to_string(IndividualAvailability mode) {
    return mode == IndividualAvailability::pooled ? "pooled" : "sampled";
}

std::vector<double> SweepAxis::values() const {
    if (!(max >= 0.0)) throw InputError("sweep axis max must be >= 0");
    if (max == 0.0) return {0.0};
    if (!(step > 0.0)) throw InputError("sweep axis step must be > 0");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double v = static_cast<double>(i) * step;
        if (v >= max - 1e-9 * max) break;
        out.push_back(v);
    }
    out.push_back(max);
    return out;
}

void ScenarioConfig::validate() const {
    if (district.n_houses < 1) throw InputError("district.n_houses must be >= 1");
    if (!(district.max_pv_kw_per_house > 0.0)) throw InputError("district.max_pv_kw_per_house must be > 0");
    if (!(pv.target_annual_cf > 0.0 && pv.target_annual_cf < 1.0))
        throw InputError("pv.target_annual_cf must be in (0, 1)");
    if (!(pv.annual_degradation >= 0.0 && pv.annual_degradation < 1.0))
        throw InputError("pv.annual_degradation must be in [0, 1)");
    fleet.validate();
    tariff.validate();
    costs.validate();
    finance.validate();
    emissions.validate();
    for (auto mode : {AnalysisMode::individual, AnalysisMode::aggregated}) {
        const auto g = grid(mode);
        if (g.pv.max > pv_limit_kw(mode) * (1.0 + 1e-12))
            throw InputError(fmt::format("sweep pv max {} kW exceeds the rooftop limit {} kW", g.pv.max,
                                         pv_limit_kw(mode)));
        (void)g.pv.values();
        (void)g.battery.values();
    }
}

Tariff ScenarioConfig::effective_tariff() const { return {tariff.import_price, fit ? tariff.export_price : 0.0}; }

double ScenarioConfig::pv_limit_kw(AnalysisMode for_mode) const {
    if (for_mode == AnalysisMode::individual) return district.max_pv_kw_per_house;
    if (district.rooftop_m2) return max_capacity_from_rooftop(*district.rooftop_m2, district.m2_per_kw);
    return district.max_pv_kw_per_house * district.n_houses;
}

SweepGrid ScenarioConfig::grid(AnalysisMode for_mode) const {
    const double p_max = pv_limit_kw(for_mode);
    SweepGrid g;
    if (for_mode == AnalysisMode::individual) {
        g.pv = {1.0, p_max};
        g.battery = {1.0, 10.0};
    } else {
        g.pv = {p_max / 20.0, p_max};
        g.battery = {p_max / 20.0, p_max};
    }
    if (mode == for_mode) {
        if (grid_pv) g.pv = *grid_pv;
        if (grid_battery) g.battery = *grid_battery;
    }
    return g;
}

std::vector<Site> build_sites(const ScenarioConfig& config, const ScenarioData& data, AnalysisMode mode) {
    if (data.demand.empty()) throw InputError("scenario has no demand profiles");
    const bool ev = config.technology == Technology::pv_plus_ev;
    FleetConfig fleet = config.fleet;
    fleet.seed = config.seed;
    std::vector<Site> sites;

    if (mode == AnalysisMode::individual) {
        FleetConfig one = fleet;
        one.n_ev = 1;
        for (std::size_t i = 0; i < data.demand.size(); ++i) {
            Site s;
            s.demand = data.demand[i];
            s.cf = data.cf;
            s.p_max_kw = config.pv_limit_kw(mode);
            s.households = 1;
            if (ev) {
                s.n_vehicles = 1;
                s.ev_usable_kwh = one.v2h_usable_kwh();
                if (config.individual_availability == IndividualAvailability::sampled) {
                    const auto schedule = vehicle_schedule(fleet, static_cast<int>(i));
                    s.ev_storage = ev_storage(config, one, StorageKind::ev_individual,
                                              availability_from_schedule(schedule).values, driving_draw(schedule));
                } else {
                    s.ev_storage = ev_storage(config, one, StorageKind::ev_pooled,
                                              availability_profile(one, FleetMode::pooled).front().values,
                                              driving_draw_pooled(one));
                }
            }
            sites.push_back(std::move(s));
        }
        return sites;
    }

    Site s;
    s.demand.assign(data.demand.front().size(), 0.0);
    for (const auto& d : data.demand)
        for (std::size_t h = 0; h < d.size(); ++h) s.demand[h] += d[h];
    s.cf = data.cf;
    s.p_max_kw = config.pv_limit_kw(mode);
    s.per_house_divisor = static_cast<double>(data.demand.size());
    s.households = static_cast<int>(data.demand.size());
    if (ev && fleet.n_ev > 0) {
        s.n_vehicles = fleet.n_ev;
        s.ev_usable_kwh = fleet.v2h_usable_kwh();
        s.ev_storage = ev_storage(config, fleet, StorageKind::ev_pooled,
                                  availability_profile(fleet, FleetMode::pooled).front().values,
                                  driving_draw_pooled(fleet));
    }
    sites.push_back(std::move(s));
    return sites;
}

SweepResult evaluate(const ScenarioConfig& config, const Site& site, double p_kw, double b_kwh, int year,
                     bool record_trace) {
    const auto base = base_dispatch(config, site);
    if (config.technology == Technology::pv_plus_ev) b_kwh = site.ev_usable_kwh;
    auto e = run(config, site, base, p_kw, b_kwh, year, record_trace);
    auto r = finish(config, site, base, std::move(e), p_kw, b_kwh, year);
    r.surface.push_back({p_kw, b_kwh, r.best_npv});
    return r;
}

std::size_t argmax_npv(const std::vector<GridPoint>& surface) {
    if (surface.empty()) throw InputError("empty sweep grid");
    std::size_t best = 0;
    for (std::size_t k = 1; k < surface.size(); ++k)
        if (surface[k].npv > surface[best].npv + kTieTolerance * std::max(1.0, std::abs(surface[best].npv)))
            best = k;
    return best;
}

SweepResult sweep_site(const ScenarioConfig& config, const Site& site, int year, const SweepGrid& grid) {
    const auto ps = grid.pv.values();
    auto bs = grid.battery.values();
    if (config.technology == Technology::pv_plus_ev) bs = {site.ev_usable_kwh};
    if (ps.empty() || bs.empty()) throw InputError("empty sweep grid");
    if (ps.back() > site.p_max_kw * (1.0 + 1e-12))
        throw InputError(fmt::format("sweep pv max {} kW exceeds the site limit {} kW", ps.back(), site.p_max_kw));

    const auto base = base_dispatch(config, site);
    std::vector<GridPoint> surface(ps.size() * bs.size());
    parallel_for(surface.size(), [&](std::size_t k) {
        const double p = ps[k / bs.size()];
        const double b = bs[k % bs.size()];
        surface[k] = {p, b, run(config, site, base, p, b, year, false).npv};
    });

    // Surface is ordered by p, then b, so keeping the first of near-equal values
    // implements the tie-break.
    const std::size_t best = argmax_npv(surface);
    const double p = surface[best].p_kw, b = surface[best].b_kwh;
    auto r = finish(config, site, base, run(config, site, base, p, b, year, false), p, b, year);
    r.surface = std::move(surface);
    return r;
}

std::vector<SweepResult> sweep(const ScenarioConfig& config, const ScenarioData& data, int year) {
    const auto sites = build_sites(config, data, config.mode);
    const auto grid = config.grid(config.mode);
    std::vector<SweepResult> out(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) out[i] = sweep_site(config, sites[i], year, grid);
    return out;
}

TrajectoryRow summarize_row(const ScenarioConfig& config, const std::vector<SweepResult>& results, int year) {
    if (results.empty()) throw InputError("no sweep results to summarize");
    TrajectoryRow row;
    row.year = year;
    row.pv_kw = mean_of(results, [](const auto& r) { return r.best_p_kw / r.per_house_divisor; });
    row.battery_kwh = mean_of(results, [](const auto& r) { return r.best_b_kwh / r.per_house_divisor; });
    row.npv = mean_of(results, [](const auto& r) { return r.best_npv / r.per_house_divisor; });
    row.sc_pct = mean_of(results, [](const auto& r) { return r.metrics.sc_pct; });
    row.ss_pct = mean_of(results, [](const auto& r) { return r.metrics.ss_pct; });
    row.es_pct = mean_of(results, [](const auto& r) { return r.metrics.es_pct; });
    row.cs_pct = mean_of(results, [](const auto& r) { return r.metrics.cs_pct; });
    row.co2_reduction_pct = mean_of(results, [](const auto& r) { return r.metrics.co2_reduction_pct; });
    row.spb_years = mean_defined(results, [](const auto& r) { return r.summary.spb_years; });
    row.irr = mean_defined(results, [](const auto& r) { return r.summary.irr; });
    row.pv_cost_usd_per_w = cost_at_year(config.costs, CostComponent::pv, year) / 1000.0;
    row.battery_cost_usd_per_kwh = cost_at_year(config.costs, CostComponent::battery, year);
    row.ev_add_cost_usd_per_kwh = cost_at_year(config.costs, CostComponent::ev_add, year);
    return row;
}

Trajectory trajectory(const ScenarioConfig& config, const ScenarioData& data, const std::vector<int>& years) {
    if (years.empty()) throw InputError("trajectory needs at least one year");
    Trajectory t{config.technology, config.fit, config.mode, {}};
    const auto sites = build_sites(config, data, config.mode);
    const auto grid = config.grid(config.mode);
    for (int year : years) {
        std::vector<SweepResult> results(sites.size());
        parallel_for(sites.size(), [&](std::size_t i) { results[i] = sweep_site(config, sites[i], year, grid); });
        t.rows.push_back(summarize_row(config, results, year));
    }
    return t;
}

ModeComparison compare_modes(const ScenarioConfig& config, const ScenarioData& data, int year) {
    ModeComparison out;
    for (auto mode : {AnalysisMode::individual, AnalysisMode::aggregated}) {
        const auto sites = build_sites(config, data, mode);
        const auto grid = config.grid(mode);
        std::vector<SweepResult> results(sites.size());
        parallel_for(sites.size(), [&](std::size_t i) { results[i] = sweep_site(config, sites[i], year, grid); });
        (mode == AnalysisMode::individual ? out.individual : out.aggregated) = summarize_row(config, results, year);
    }
    out.delta_npv = out.aggregated.npv - out.individual.npv;
    out.delta_sc_pct = out.aggregated.sc_pct - out.individual.sc_pct;
    out.delta_ss_pct = out.aggregated.ss_pct - out.individual.ss_pct;
    out.delta_cs_pct = out.aggregated.cs_pct - out.individual.cs_pct;
    out.delta_co2_pct = out.aggregated.co2_reduction_pct - out.individual.co2_reduction_pct;
    return out;
}

}  // namespace solarev
