// Command-line front end: every subcommand writes manifest.json, then its CSVs.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "solarev/fixtures.hpp"
#include "solarev/report.hpp"
#include "solarev/scenario.hpp"

namespace fs = std::filesystem;
using namespace solarev;

namespace {

struct Globals {
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> argv;
};

fs::path output_dir(const Globals& g) {
    if (!g.out.empty()) return g.out;
    if (const char* env = std::getenv("SOLAREV_OUT_DIR"); env && *env) return env;
    return "out";
}

int parse_int(const std::string& s, const char* what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw InputError(fmt::format("{}: '{}' is not an integer", what, s));
    return v;
}

/// "a:b" (step 1), "a:b:step", or "a,b,c".
std::vector<int> parse_int_list(const std::string& spec, const char* what) {
    std::vector<int> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<int> parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = spec.find(':', start);
            parts.push_back(parse_int(spec.substr(start, pos - start), what));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        if (parts.size() < 2 || parts.size() > 3) throw InputError(fmt::format("{}: expected from:to[:step]", what));
        const int step = parts.size() == 3 ? parts[2] : 1;
        if (step <= 0 || parts[1] < parts[0]) throw InputError(fmt::format("{}: empty range '{}'", what, spec));
        for (int v = parts[0]; v <= parts[1]; v += step) out.push_back(v);
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto pos = spec.find(',', start);
        out.push_back(parse_int(spec.substr(start, pos - start), what));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

struct Loaded {
    ParsedScenario parsed;
    fs::path path;
};

Loaded load(const std::string& path, const Globals& g) {
    Loaded l{parse_scenario(fs::path(path)), path};
    if (g.seed) {
        l.parsed.config.seed = *g.seed;
        l.parsed.config.fleet.seed = *g.seed;
    }
    return l;
}

void manifest(const Globals& g, const std::string& command, std::uint64_t seed, const Loaded* scenario) {
    RunManifest m;
    m.command = command;
    m.seed = seed;
    m.output_dir = output_dir(g);
    m.started_at = utc_timestamp();
    m.arguments = g.argv;
    if (scenario) {
        m.scenario_path = scenario->path;
        m.defaults_applied = scenario->parsed.defaults_applied;
        m.warnings = scenario->parsed.warnings;
        m.resolved_config = emit_scenario(scenario->parsed.config);
    }
    write_manifest(m);
    for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
}

void write_surface(const fs::path& path, const std::vector<SweepResult>& results) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
    out << "site,p_kw,b_kwh,npv_usd\n";
    for (std::size_t s = 0; s < results.size(); ++s)
        for (const auto& pt : results[s].surface)
            out << fmt::format("{},{},{},{}\n", s, pt.p_kw, pt.b_kwh, pt.npv);
}

Trajectory single_row(const ScenarioConfig& c, TrajectoryRow row) {
    return Trajectory{c.technology, c.fit, c.mode, {row}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"District PV, battery and EV storage techno-economic simulator"};
    app.require_subcommand(1);
    Globals g;
    for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);
    app.add_option("--out", g.out, "Output directory (else $SOLAREV_OUT_DIR, else ./out)");
    app.add_option("--seed", g.seed, "Override the scenario or command seed");
    app.set_version_flag("--version", kToolVersion);

    std::string config;
    double p_kw = -1.0, b_kwh = -1.0;
    int year = 0;
    bool trace = false;
    auto* simulate = app.add_subcommand("simulate", "Evaluate one (PV, storage) configuration");
    simulate->add_option("config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--p", p_kw, "PV kW per site (default: the PV limit)");
    simulate->add_option("--b", b_kwh, "Battery kWh per site (default: the battery grid max)");
    simulate->add_option("--year", year, "Installation year (default: finance start year)");
    simulate->add_flag("--trace", trace, "Also write the first site's first-year hourly trace");

    auto* sweep_cmd = app.add_subcommand("sweep", "Grid search for the max-NPV configuration");
    sweep_cmd->add_option("config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--year", year, "Installation year")->required();

    std::string years_spec = "2020:2040:5";
    auto* traj_cmd = app.add_subcommand("trajectory", "Optimal configuration per installation year");
    traj_cmd->add_option("config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    traj_cmd->add_option("--years", years_spec, "from:to[:step] or a comma list");

    auto* compare_cmd = app.add_subcommand("compare", "Individual versus aggregated optimum");
    compare_cmd->add_option("config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--year", year, "Installation year")->required();

    std::string evs_spec = "1:100";
    int days = 1000, trips = 3;
    auto* fleet_cmd = app.add_subcommand("fleet-experiment", "Fleet availability versus fleet size");
    fleet_cmd->add_option("--evs", evs_spec, "from:to[:step] or a comma list");
    fleet_cmd->add_option("--days", days, "Simulated days")->check(CLI::PositiveNumber);
    fleet_cmd->add_option("--trips", trips, "Trips per vehicle-day")->check(CLI::Range(1, 12));

    std::string kind = "residential";
    int houses = 50;
    double annual_kwh = 5915.0, target_cf = 0.135;
    auto* synth_cmd = app.add_subcommand("synth-fixtures", "Write synthetic demand.csv and cf.csv");
    synth_cmd->add_option("--kind", kind)->check(CLI::IsMember({"residential", "commercial"}));
    synth_cmd->add_option("--houses", houses)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--annual-kwh", annual_kwh)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--cf", target_cf)->check(CLI::Range(0.001, 1.0));

    std::vector<std::string> inputs;
    auto* report_cmd = app.add_subcommand("report", "Results table from trajectory CSVs");
    report_cmd->add_option("trajectories", inputs, "trajectory.csv files")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path out = output_dir(g);
        if (*simulate) {
            auto l = load(config, g);
            const auto& c = l.parsed.config;
            manifest(g, "simulate", c.seed, &l);
            const auto data = load_scenario_data(c);
            const auto sites = build_sites(c, data, c.mode);
            const int y = year != 0 ? year : c.finance.project_start_year;
            const double p = p_kw >= 0.0 ? p_kw : sites.front().p_max_kw;
            const double b = b_kwh >= 0.0 ? b_kwh : c.grid(c.mode).battery.max;
            std::vector<SweepResult> results(sites.size());
            for (std::size_t s = 0; s < sites.size(); ++s)
                results[s] = evaluate(c, sites[s], p, b, y, trace && s == 0);
            write_trajectory_csv(out / "simulate.csv", single_row(c, summarize_row(c, results, y)));
            if (trace) {
                const auto& first = results.front().dispatch.years.front();
                if (first.trace) write_trace_csv(out / "trace.csv", *first.trace);
            }
        } else if (*sweep_cmd) {
            auto l = load(config, g);
            const auto& c = l.parsed.config;
            manifest(g, "sweep", c.seed, &l);
            const auto data = load_scenario_data(c);
            const auto results = sweep(c, data, year);
            write_surface(out / "surface.csv", results);
            write_trajectory_csv(out / "optimum.csv", single_row(c, summarize_row(c, results, year)));
        } else if (*traj_cmd) {
            const auto years = parse_int_list(years_spec, "--years");
            auto l = load(config, g);
            const auto& c = l.parsed.config;
            manifest(g, "trajectory", c.seed, &l);
            const auto data = load_scenario_data(c);
            write_trajectory_csv(out / "trajectory.csv", trajectory(c, data, years));
        } else if (*compare_cmd) {
            auto l = load(config, g);
            const auto& c = l.parsed.config;
            manifest(g, "compare", c.seed, &l);
            const auto data = load_scenario_data(c);
            const auto cmp = compare_modes(c, data, year);
            auto ind = c;
            ind.mode = AnalysisMode::individual;
            auto agg = c;
            agg.mode = AnalysisMode::aggregated;
            write_trajectory_csv(out / "individual.csv", single_row(ind, cmp.individual));
            write_trajectory_csv(out / "aggregated.csv", single_row(agg, cmp.aggregated));
            std::ofstream delta(out / "compare.csv", std::ios::binary);
            delta << "delta_npv_usd,delta_sc_pct,delta_ss_pct,delta_cs_pct,delta_co2_pct\n"
                  << fmt::format("{},{},{},{},{}\n", cmp.delta_npv, cmp.delta_sc_pct, cmp.delta_ss_pct,
                                 cmp.delta_cs_pct, cmp.delta_co2_pct);
        } else if (*fleet_cmd) {
            const auto evs = parse_int_list(evs_spec, "--evs");
            const std::uint64_t seed = g.seed.value_or(1);
            manifest(g, "fleet-experiment", seed, nullptr);
            write_fleet_experiment_csv(out / "fleet_experiment.csv",
                                       min_availability_experiment(evs, days, seed, trips));
        } else if (*synth_cmd) {
            FixtureOptions o;
            o.kind = kind == "commercial" ? FixtureKind::commercial : FixtureKind::residential;
            o.n_houses = houses;
            o.seed = g.seed.value_or(1);
            o.annual_kwh_mean = annual_kwh;
            o.target_cf = target_cf;
            manifest(g, "synth-fixtures", o.seed, nullptr);
            const auto f = synth_fixtures(o);
            write_demand_csv(out / "demand.csv", f.house_ids, f.demand);
            write_cf_csv(out / "cf.csv", f.cf);
        } else if (*report_cmd) {
            std::vector<Trajectory> ts;
            for (const auto& p : inputs) ts.push_back(read_trajectory_csv(p));
            const auto table = build_report(ts);
            manifest(g, "report", 0, nullptr);
            write_report_csv(out / "report.csv", table);
            write_report_text(out / "report.txt", table);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
