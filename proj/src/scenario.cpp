#include "solarev/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "solarev/fixtures.hpp"

namespace solarev {

namespace {

using json = nlohmann::json;

struct Range {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_open = false;
    bool hi_open = false;

    bool contains(double v) const {
        return (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
    }
    std::string describe() const {
        return fmt::format("{}{}, {}{}", lo_open ? "(" : "[", lo, hi, hi_open ? ")" : "]");
    }
};

constexpr double kInf = std::numeric_limits<double>::infinity();
const Range kNonNegative{0.0, kInf};
const Range kPositive{0.0, kInf, true};
const Range kUnit{0.0, 1.0};
const Range kUnitOpenLow{0.0, 1.0, true};
const Range kOpenUnit{0.0, 1.0, true, true};

class Section {
public:
    Section(const json& node, std::string path, ParsedScenario& out) : node_(node), path_(std::move(path)), out_(out) {
        if (!node_.is_object()) throw InputError(fmt::format("{}: expected an object", display()));
    }
    Section(const Section&) = delete;

    ~Section() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& [key, value] : node_.items())
            if (!used_.count(key)) throw InputError(fmt::format("unknown key '{}'", key_path(key)));
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    double number(const std::string& key, double def, const Range& range = {}) {
        if (!present(key)) return defaulted(key, def);
        return checked(key, require_number(key), range);
    }

    double required_number(const std::string& key, const Range& range = {}) {
        if (!present(key)) throw InputError(fmt::format("missing required key '{}'", key_path(key)));
        return checked(key, require_number(key), range);
    }

    std::optional<double> optional_number(const std::string& key, const Range& range = {}) {
        if (!present(key) || node_.at(key).is_null()) {
            used_.insert(key);
            return std::nullopt;
        }
        return checked(key, require_number(key), range);
    }

    int integer(const std::string& key, int def, int lo = std::numeric_limits<int>::min(),
                int hi = std::numeric_limits<int>::max()) {
        if (!present(key)) return defaulted(key, def);
        const auto& v = node_.at(key);
        if (!v.is_number_integer()) throw InputError(fmt::format("{}: expected an integer", key_path(key)));
        const auto x = v.get<long long>();
        if (x < lo || x > hi) throw InputError(fmt::format("{}: {} outside [{}, {}]", key_path(key), x, lo, hi));
        return static_cast<int>(x);
    }

    std::uint64_t seed(const std::string& key, std::uint64_t def) {
        if (!present(key)) return defaulted(key, def);
        const auto& v = node_.at(key);
        if (!v.is_number_unsigned()) throw InputError(fmt::format("{}: expected a non-negative integer", key_path(key)));
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key, std::optional<bool> def = std::nullopt) {
        if (!present(key)) {
            if (!def) throw InputError(fmt::format("missing required key '{}'", key_path(key)));
            return defaulted(key, *def);
        }
        const auto& v = node_.at(key);
        if (!v.is_boolean()) throw InputError(fmt::format("{}: expected true or false", key_path(key)));
        return v.get<bool>();
    }

    std::string string(const std::string& key, std::optional<std::string> def = std::nullopt) {
        if (!present(key)) {
            if (!def) throw InputError(fmt::format("missing required key '{}'", key_path(key)));
            return defaulted(key, *def);
        }
        const auto& v = node_.at(key);
        if (!v.is_string()) throw InputError(fmt::format("{}: expected a string", key_path(key)));
        return v.get<std::string>();
    }

    template <typename E>
    E choice(const std::string& key, std::initializer_list<E> options, std::optional<E> def = std::nullopt) {
        std::string names;
        for (E e : options) names += fmt::format("{}'{}'", names.empty() ? "" : ", ", to_string(e));
        if (!present(key)) {
            if (!def) throw InputError(fmt::format("missing required key '{}' (one of {})", key_path(key), names));
            defaulted(key, 0);
            return *def;
        }
        const auto s = string(key);
        for (E e : options)
            if (s == to_string(e)) return e;
        throw InputError(fmt::format("{}: '{}' is not one of {}", key_path(key), s, names));
    }

    std::optional<std::filesystem::path> path(const std::string& key, const std::filesystem::path& base) {
        if (!present(key) || node_.at(key).is_null()) {
            used_.insert(key);
            return std::nullopt;
        }
        std::filesystem::path p = string(key);
        if (p.is_relative() && !base.empty()) p = base / p;
        return p.lexically_normal();
    }

    /// Sub-section; an absent key yields an empty object.
    Section child(const std::string& key) { return child(key, out_); }

    Section child(const std::string& key, ParsedScenario& sink) {
        used_.insert(key);
        static const json empty = json::object();
        return Section(node_.contains(key) ? node_.at(key) : empty, key_path(key), sink);
    }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    bool present(const std::string& key) {
        used_.insert(key);
        return node_.contains(key);
    }

    template <typename T>
    T defaulted(const std::string& key, T value) {
        out_.defaults_applied.push_back(key_path(key));
        return value;
    }

    double require_number(const std::string& key) const {
        const auto& v = node_.at(key);
        if (!v.is_number()) throw InputError(fmt::format("{}: expected a number", key_path(key)));
        return v.get<double>();
    }

    double checked(const std::string& key, double v, const Range& range) const {
        if (!std::isfinite(v) || !range.contains(v))
            throw InputError(fmt::format("{}: {} outside {}", key_path(key), v, range.describe()));
        return v;
    }

    std::string display() const { return path_.empty() ? "scenario" : path_; }

    const json& node_;
    std::string path_;
    ParsedScenario& out_;
    std::set<std::string> used_;
};

SweepAxis axis(Section& s, const std::string& prefix) {
    SweepAxis a;
    a.step = s.required_number(prefix + "_step", kPositive);
    a.max = s.required_number(prefix + "_max", kNonNegative);
    return a;
}

}  // namespace

ParsedScenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
    ParsedScenario out;
    auto& c = out.config;
    {
        Section root(doc, "", out);
        c.name = root.string("name", std::string("scenario"));
        c.seed = root.seed("seed", 1);
        c.technology = root.choice("technology", {Technology::pv_plus_battery, Technology::pv_plus_ev});
        c.fit = root.boolean("fit");
        c.mode = root.choice("mode", {AnalysisMode::individual, AnalysisMode::aggregated});

        {
            auto d = root.child("district");
            c.district.demand_csv = d.path("demand_csv", base_dir);
            c.district.fixture_kind =
                d.choice("fixture", {FixtureKind::residential, FixtureKind::commercial}, std::optional{FixtureKind::residential});
            c.district.n_houses = d.integer("n_houses", 50, 1);
            c.district.fixture_annual_kwh = d.number("fixture_annual_kwh", 5915.0, kPositive);
            c.district.max_pv_kw_per_house = d.number("max_pv_kw_per_house", 10.0, kPositive);
            c.district.rooftop_m2 = d.optional_number("rooftop_m2", kPositive);
            c.district.m2_per_kw = d.number("m2_per_kw", 8.29, kPositive);
        }
        {
            auto p = root.child("pv");
            c.pv.cf_csv = p.path("cf_csv", base_dir);
            c.pv.target_annual_cf = p.number("target_annual_cf", 0.135, kOpenUnit);
            c.pv.annual_degradation = p.number("annual_degradation", 0.005, Range{0.0, 1.0, false, true});
        }
        {
            auto s = root.child("sweep");
            if (s.has("pv_step") || s.has("pv_max")) c.grid_pv = axis(s, "pv");
            if (s.has("battery_step") || s.has("battery_max")) c.grid_battery = axis(s, "battery");
        }
        {
            const bool ev = c.technology == Technology::pv_plus_ev;
            if (!ev && root.has("fleet")) out.warnings.push_back("fleet block ignored: technology is pv_plus_battery");
            // An ignored block is still checked, but its defaults are not reported.
            ParsedScenario discard;
            Section fleet = root.child("fleet", ev ? out : discard);
            FleetConfig fl;
            fl.n_ev = fleet.integer("n_ev", c.district.n_houses, 0);
            fl.battery_kwh_per_ev = fleet.number("battery_kwh_per_ev", 40.0, kPositive);
            fl.v2h_fraction = fleet.number("v2h_fraction", 0.5, kUnitOpenLow);
            fl.daytime_availability = fleet.number("daytime_availability", 0.75, kUnit);
            fl.daytime_start = fleet.integer("daytime_start", kDaytimeStart, 0, 23);
            fl.daytime_end = fleet.integer("daytime_end", kDaytimeEnd, 1, 24);
            fl.trips_per_day = fleet.integer("trips_per_day", 3, 0, 24);
            fl.energy_per_trip_kwh = fleet.number("energy_per_trip_kwh", 1.1, kNonNegative);
            fl.km_per_trip = fleet.number("km_per_trip", 5.8, kNonNegative);
            const bool driving = fleet.boolean("driving", true);
            const auto availability = fleet.choice(
                "individual_availability", {IndividualAvailability::sampled, IndividualAvailability::pooled},
                std::optional{IndividualAvailability::sampled});
            if (ev) {
                c.fleet = fl;
                c.fleet_driving = driving;
                c.individual_availability = availability;
            } else {
                c.fleet.n_ev = c.district.n_houses;
            }
            c.fleet.seed = c.seed;
        }
        {
            auto s = root.child("storage");
            c.storage.charge_efficiency = s.number("charge_efficiency", 0.95, kUnitOpenLow);
            c.storage.discharge_efficiency = s.number("discharge_efficiency", 0.95, kUnitOpenLow);
            c.storage.power_limit_kw = s.optional_number("power_limit_kw", kNonNegative);
            c.storage.degradation.calendar_rate = s.number("calendar_rate", 0.01, Range{0.0, 1.0, false, true});
            c.storage.degradation.cycle_rate = s.number("cycle_rate", 0.00005, Range{0.0, 1.0, false, true});
            c.storage.replacement_threshold = s.number("replacement_threshold", 0.8, kOpenUnit);
        }
        {
            if (!root.has("tariff")) throw InputError("missing required key 'tariff'");
            auto t = root.child("tariff");
            c.tariff.import_price = t.required_number("import_price", kNonNegative);
            c.tariff.export_price = t.required_number("export_price", kNonNegative);
        }
        {
            auto k = root.child("costs");
            auto& s = c.costs;
            s.base_year = k.integer("base_year", 2020);
            s.pv_cost_0 = k.number("pv_usd_per_kw", 2200.0, kNonNegative);
            s.battery_cost_0 = k.number("battery_usd_per_kwh", 1182.0, kNonNegative);
            s.ev_add_cost_0 = k.number("ev_add_usd_per_kwh", 200.0, kNonNegative);
            s.pv_rate = k.number("pv_rate", 0.925, kUnitOpenLow);
            s.battery_rate = k.number("battery_rate", 0.94, kUnitOpenLow);
            s.ev_add_rate = k.number("ev_add_rate", 0.81, kUnitOpenLow);
            s.m_pv_per_kw = k.optional_number("m_pv_usd_per_kw_yr", kNonNegative);
            s.m_pv_capex_fraction = k.number("m_pv_capex_fraction", 0.01, kNonNegative);
            s.r_battery_mode = k.choice("r_battery_mode", {ReplacementCost::battery_trajectory, ReplacementCost::fixed},
                                        std::optional{ReplacementCost::battery_trajectory});
            s.r_battery_fixed = k.optional_number("r_battery_usd_per_kwh", kNonNegative);
        }
        {
            auto f = root.child("finance");
            c.finance.discount_rate = f.number("discount_rate", 0.03, Range{-1.0, kInf, true});
            c.finance.project_years = f.integer("project_years", 25, 1, 200);
            c.finance.project_start_year = f.integer("start_year", c.costs.base_year);
        }
        {
            auto e = root.child("emissions");
            c.emissions.grid_kg_per_kwh = e.number("grid_kg_per_kwh", 0.522, kNonNegative);
            c.emissions.gasoline_kg_per_l = e.number("gasoline_kg_per_l", 2.3, kNonNegative);
        }
        {
            auto t = root.child("transport");
            c.transport.annual_km = t.number("annual_km", 6368.0, kPositive);
            c.transport.gasoline_km_per_l = t.number("gasoline_km_per_l", 12.6, kPositive);
            c.transport.gasoline_price = t.number("gasoline_usd_per_l", 1.29, kPositive);
            c.transport.ev_km_per_kwh = t.number("ev_km_per_kwh", 5.3, kPositive);
            c.transport.gasoline_co2_kg_per_l = c.emissions.gasoline_kg_per_l;
            c.transport.ev_battery_kwh = c.fleet.battery_kwh_per_ev;
            c.transport.n_vehicles = c.technology == Technology::pv_plus_ev ? c.fleet.n_ev : 0;
        }
    }
    if (c.costs.base_year > c.finance.project_start_year)
        throw InputError("finance.start_year: precedes costs.base_year");
    c.validate();
    return out;
}

ParsedScenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open scenario {}", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(fmt::format("{}: {}", path.string(), e.what()));
    }
    return parse_scenario(doc, path.parent_path());
}

json emit_scenario(const ScenarioConfig& c) {
    json j;
    j["name"] = c.name;
    j["seed"] = c.seed;
    j["technology"] = to_string(c.technology);
    j["fit"] = c.fit;
    j["mode"] = to_string(c.mode);

    auto& d = j["district"];
    d["demand_csv"] = c.district.demand_csv ? json(c.district.demand_csv->string()) : json(nullptr);
    d["fixture"] = to_string(c.district.fixture_kind);
    d["n_houses"] = c.district.n_houses;
    d["fixture_annual_kwh"] = c.district.fixture_annual_kwh;
    d["max_pv_kw_per_house"] = c.district.max_pv_kw_per_house;
    d["rooftop_m2"] = c.district.rooftop_m2 ? json(*c.district.rooftop_m2) : json(nullptr);
    d["m2_per_kw"] = c.district.m2_per_kw;

    auto& p = j["pv"];
    p["cf_csv"] = c.pv.cf_csv ? json(c.pv.cf_csv->string()) : json(nullptr);
    p["target_annual_cf"] = c.pv.target_annual_cf;
    p["annual_degradation"] = c.pv.annual_degradation;

    auto& s = j["sweep"];
    s = json::object();
    if (c.grid_pv) {
        s["pv_step"] = c.grid_pv->step;
        s["pv_max"] = c.grid_pv->max;
    }
    if (c.grid_battery) {
        s["battery_step"] = c.grid_battery->step;
        s["battery_max"] = c.grid_battery->max;
    }

    if (c.technology == Technology::pv_plus_ev) {
        auto& f = j["fleet"];
        f["n_ev"] = c.fleet.n_ev;
        f["battery_kwh_per_ev"] = c.fleet.battery_kwh_per_ev;
        f["v2h_fraction"] = c.fleet.v2h_fraction;
        f["daytime_availability"] = c.fleet.daytime_availability;
        f["daytime_start"] = c.fleet.daytime_start;
        f["daytime_end"] = c.fleet.daytime_end;
        f["trips_per_day"] = c.fleet.trips_per_day;
        f["energy_per_trip_kwh"] = c.fleet.energy_per_trip_kwh;
        f["km_per_trip"] = c.fleet.km_per_trip;
        f["driving"] = c.fleet_driving;
        f["individual_availability"] = to_string(c.individual_availability);
    }

    auto& st = j["storage"];
    st["charge_efficiency"] = c.storage.charge_efficiency;
    st["discharge_efficiency"] = c.storage.discharge_efficiency;
    st["power_limit_kw"] = c.storage.power_limit_kw ? json(*c.storage.power_limit_kw) : json(nullptr);
    st["calendar_rate"] = c.storage.degradation.calendar_rate;
    st["cycle_rate"] = c.storage.degradation.cycle_rate;
    st["replacement_threshold"] = c.storage.replacement_threshold;

    j["tariff"] = {{"import_price", c.tariff.import_price}, {"export_price", c.tariff.export_price}};

    auto& k = j["costs"];
    k["base_year"] = c.costs.base_year;
    k["pv_usd_per_kw"] = c.costs.pv_cost_0;
    k["battery_usd_per_kwh"] = c.costs.battery_cost_0;
    k["ev_add_usd_per_kwh"] = c.costs.ev_add_cost_0;
    k["pv_rate"] = c.costs.pv_rate;
    k["battery_rate"] = c.costs.battery_rate;
    k["ev_add_rate"] = c.costs.ev_add_rate;
    k["m_pv_usd_per_kw_yr"] = c.costs.m_pv_per_kw ? json(*c.costs.m_pv_per_kw) : json(nullptr);
    k["m_pv_capex_fraction"] = c.costs.m_pv_capex_fraction;
    k["r_battery_mode"] = to_string(c.costs.r_battery_mode);
    k["r_battery_usd_per_kwh"] = c.costs.r_battery_fixed ? json(*c.costs.r_battery_fixed) : json(nullptr);

    j["finance"] = {{"discount_rate", c.finance.discount_rate},
                    {"project_years", c.finance.project_years},
                    {"start_year", c.finance.project_start_year}};
    j["emissions"] = {{"grid_kg_per_kwh", c.emissions.grid_kg_per_kwh},
                      {"gasoline_kg_per_l", c.emissions.gasoline_kg_per_l}};
    j["transport"] = {{"annual_km", c.transport.annual_km},
                      {"gasoline_km_per_l", c.transport.gasoline_km_per_l},
                      {"gasoline_usd_per_l", c.transport.gasoline_price},
                      {"ev_km_per_kwh", c.transport.ev_km_per_kwh}};
    return j;
}

ScenarioData load_scenario_data(const ScenarioConfig& c) {
    ScenarioData data;
    if (c.district.demand_csv) {
        for (auto& [id, profile] : load_demand_csv(*c.district.demand_csv)) {
            data.house_ids.push_back(id);
            data.demand.push_back(fill_gaps(profile).dense());
        }
        if (data.demand.empty()) throw InputError("demand file has no rows");
    } else {
        FixtureOptions o;
        o.kind = c.district.fixture_kind;
        o.n_houses = c.district.n_houses;
        o.seed = c.seed;
        o.annual_kwh_mean = c.district.fixture_annual_kwh;
        o.target_cf = c.pv.target_annual_cf;
        auto f = synth_fixtures(o);
        data.house_ids = std::move(f.house_ids);
        for (const auto& p : f.demand) data.demand.push_back(p.dense());
        if (!c.pv.cf_csv) data.cf = f.cf.dense();
    }
    if (c.pv.cf_csv)
        data.cf = calibrate_cf(fill_gaps(load_cf_csv(*c.pv.cf_csv)), c.pv.target_annual_cf).dense();
    return data;
}

std::string utc_timestamp() {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    const auto day = std::chrono::floor<std::chrono::days>(now);
    const std::chrono::year_month_day ymd{day};
    const std::chrono::hh_mm_ss hms{now - day};
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hms.hours().count(),
                       hms.minutes().count(), hms.seconds().count());
}

void write_manifest(const RunManifest& m) {
    std::filesystem::create_directories(m.output_dir);
    json j;
    j["tool"] = "solarev";
    j["tool_version"] = m.tool_version;
    j["command"] = m.command;
    j["arguments"] = m.arguments;
    j["scenario_path"] = m.scenario_path.string();
    j["seed"] = m.seed;
    j["output_dir"] = m.output_dir.string();
    j["started_at"] = m.started_at;
    j["defaults_applied"] = m.defaults_applied;
    j["warnings"] = m.warnings;
    j["resolved_config"] = m.resolved_config;
    std::ofstream out(m.output_dir / "manifest.json", std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write manifest in {}", m.output_dir.string()));
    out << j.dump(2) << '\n';
}

}  // namespace solarev
