#include "solarev/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace solarev {

namespace {

const char* technology_label(Technology t) { return t == Technology::pv_plus_ev ? "PV + EV" : "PV (+battery)"; }
const char* fit_label(bool fit) { return fit ? "w/ FIT" : "w/o FIT"; }
const char* mode_label(AnalysisMode m) { return m == AnalysisMode::individual ? "Indiv." : "Agg."; }

enum class Style { money, capacity, percent, years, unit_cost };

struct Item {
    const char* name;
    Style style;
    std::optional<double> (*get)(const TrajectoryRow&);
};

const Item kItems[] = {
    {"PV capacity (kW)", Style::capacity, [](const TrajectoryRow& r) -> std::optional<double> { return r.pv_kw; }},
    {"Battery capacity (kWh)", Style::capacity,
     [](const TrajectoryRow& r) -> std::optional<double> { return r.battery_kwh; }},
    {"NPV ($)", Style::money, [](const TrajectoryRow& r) -> std::optional<double> { return r.npv; }},
    {"Self-consumption (%)", Style::percent, [](const TrajectoryRow& r) -> std::optional<double> { return r.sc_pct; }},
    {"Self-sufficiency (%)", Style::percent, [](const TrajectoryRow& r) -> std::optional<double> { return r.ss_pct; }},
    {"Energy sufficiency (%)", Style::percent,
     [](const TrajectoryRow& r) -> std::optional<double> { return r.es_pct; }},
    {"CO2 emission reduction (%)", Style::percent,
     [](const TrajectoryRow& r) -> std::optional<double> { return r.co2_reduction_pct; }},
    {"Cost saving (%)", Style::percent, [](const TrajectoryRow& r) -> std::optional<double> { return r.cs_pct; }},
    {"Simple payback period (year)", Style::years,
     [](const TrajectoryRow& r) -> std::optional<double> { return r.spb_years; }},
    {"IRR (%)", Style::percent,
     [](const TrajectoryRow& r) -> std::optional<double> {
         if (!r.irr) return std::nullopt;
         return *r.irr * 100.0;
     }},
};

Style style_of(const std::string& item) {
    for (const auto& i : kItems)
        if (item == i.name) return i.style;
    return Style::unit_cost;
}

std::string with_commas(long long v) {
    std::string digits = std::to_string(v < 0 ? -v : v);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
        out += digits[i];
    }
    return v < 0 ? "-" + out : out;
}

std::string human(std::optional<double> v, Style style) {
    if (!v) return "-";
    switch (style) {
        case Style::money: return with_commas(std::llround(*v));
        case Style::percent:
        case Style::years: return fmt::format("{}", std::llround(*v));
        case Style::capacity: {
            const double r = std::round(*v * 10.0) / 10.0;
            return r == std::round(r) ? with_commas(std::llround(r)) : fmt::format("{:.1f}", r);
        }
        case Style::unit_cost: return *v < 10.0 ? fmt::format("{:.2f}", *v) : fmt::format("{}", std::llround(*v));
    }
    return "";
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::optional<double> parse_optional(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw InputError(fmt::format("bad number '{}'", s));
    return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
    return out;
}

constexpr const char* kTrajectoryHeader =
    "technology,fit,mode,year,pv_kw,battery_kwh,npv_usd,sc_pct,ss_pct,es_pct,co2_reduction_pct,cs_pct,spb_years,irr,"
    "pv_cost_usd_per_w,battery_cost_usd_per_kwh,ev_add_cost_usd_per_kwh";

}  // namespace

std::string format_number(std::optional<double> v) {
    if (!v) return "";
    return fmt::format("{}", *v);
}

ReportTable build_report(const std::vector<Trajectory>& trajectories) {
    if (trajectories.empty()) throw InputError("nothing to report");
    ReportTable table;
    for (const auto& row : trajectories.front().rows) table.years.push_back(row.year);
    if (table.years.empty()) throw InputError("nothing to report");
    for (const auto& t : trajectories) {
        std::vector<int> years;
        for (const auto& row : t.rows) years.push_back(row.year);
        if (years != table.years) throw InputError("trajectories cover different years");
    }

    const auto& first = trajectories.front().rows;
    auto cost_line = [&](const char* item, auto&& get) {
        ReportLine line{item, "All", "All", "All", {}};
        for (const auto& row : first) line.values.push_back(get(row));
        table.lines.push_back(std::move(line));
    };
    cost_line("PV cost ($/W)", [](const TrajectoryRow& r) { return r.pv_cost_usd_per_w; });
    cost_line("Battery cost ($/kWh)", [](const TrajectoryRow& r) { return r.battery_cost_usd_per_kwh; });
    cost_line("EV additional ($/kWh)", [](const TrajectoryRow& r) { return r.ev_add_cost_usd_per_kwh; });

    for (const auto& item : kItems) {
        for (const auto& t : trajectories) {
            ReportLine line{item.name, technology_label(t.technology), fit_label(t.fit), mode_label(t.mode), {}};
            for (const auto& row : t.rows) line.values.push_back(item.get(row));
            table.lines.push_back(std::move(line));
        }
    }
    return table;
}

void write_report_csv(const std::filesystem::path& path, const ReportTable& table) {
    auto out = open_out(path);
    out << "item,condition1,condition2,condition3";
    for (int y : table.years) out << ",y" << y;
    out << '\n';
    for (const auto& line : table.lines) {
        out << line.item << ',' << line.condition1 << ',' << line.condition2 << ',' << line.condition3;
        for (const auto& v : line.values) out << ',' << format_number(v);
        out << '\n';
    }
}

void write_report_text(const std::filesystem::path& path, const ReportTable& table) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"Items", "Condition 1", "Condition 2", "Condition 3"};
    for (int y : table.years) header.push_back(std::to_string(y));
    cells.push_back(header);
    std::string previous;
    for (const auto& line : table.lines) {
        std::vector<std::string> row{line.item == previous ? "" : line.item, line.condition1, line.condition2,
                                     line.condition3};
        previous = line.item;
        const auto style = style_of(line.item);
        for (const auto& v : line.values) row.push_back(human(v, style));
        cells.push_back(std::move(row));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    auto out = open_out(path);
    for (const auto& row : cells) {
        std::string text;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c < 4)
                text += fmt::format("{:<{}}  ", row[c], width[c]);
            else
                text += fmt::format("{:>{}}  ", row[c], width[c]);
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out << text << '\n';
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t) {
    auto out = open_out(path);
    out << kTrajectoryHeader << '\n';
    for (const auto& r : t.rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(t.technology),
                           t.fit ? "true" : "false", to_string(t.mode), r.year, format_number(r.pv_kw),
                           format_number(r.battery_kwh), format_number(r.npv), format_number(r.sc_pct),
                           format_number(r.ss_pct), format_number(r.es_pct), format_number(r.co2_reduction_pct),
                           format_number(r.cs_pct), format_number(r.spb_years), format_number(r.irr),
                           format_number(r.pv_cost_usd_per_w), format_number(r.battery_cost_usd_per_kwh),
                           format_number(r.ev_add_cost_usd_per_kwh));
    }
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader)
        throw InputError(fmt::format("{}: not a trajectory file", path.string()));
    Trajectory t;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 17) throw InputError(fmt::format("{}: expected 17 fields", path.string()));
        const Technology tech = f[0] == "pv_plus_ev" ? Technology::pv_plus_ev : Technology::pv_plus_battery;
        const bool fit = f[1] == "true";
        const AnalysisMode mode = f[2] == "individual" ? AnalysisMode::individual : AnalysisMode::aggregated;
        if (first) {
            t.technology = tech;
            t.fit = fit;
            t.mode = mode;
            first = false;
        } else if (tech != t.technology || fit != t.fit || mode != t.mode) {
            throw InputError(fmt::format("{}: mixed scenarios in one trajectory file", path.string()));
        }
        TrajectoryRow r;
        r.year = static_cast<int>(parse_optional(f[3]).value_or(0));
        r.pv_kw = parse_optional(f[4]).value_or(0);
        r.battery_kwh = parse_optional(f[5]).value_or(0);
        r.npv = parse_optional(f[6]).value_or(0);
        r.sc_pct = parse_optional(f[7]).value_or(0);
        r.ss_pct = parse_optional(f[8]).value_or(0);
        r.es_pct = parse_optional(f[9]).value_or(0);
        r.co2_reduction_pct = parse_optional(f[10]).value_or(0);
        r.cs_pct = parse_optional(f[11]).value_or(0);
        r.spb_years = parse_optional(f[12]);
        r.irr = parse_optional(f[13]);
        r.pv_cost_usd_per_w = parse_optional(f[14]).value_or(0);
        r.battery_cost_usd_per_kwh = parse_optional(f[15]).value_or(0);
        r.ev_add_cost_usd_per_kwh = parse_optional(f[16]).value_or(0);
        t.rows.push_back(r);
    }
    return t;
}

void write_fleet_experiment_csv(const std::filesystem::path& path, const std::vector<FleetExperimentRow>& rows) {
    auto out = open_out(path);
    out << "n_ev,mean_daytime_avail,mean_daily_min_avail\n";
    for (const auto& r : rows)
        out << fmt::format("{},{},{}\n", r.n_ev, r.mean_daytime_availability, r.mean_daily_min_availability);
}

void write_trace_csv(const std::filesystem::path& path, const HourlyTrace& t) {
    auto out = open_out(path);
    out << "hour,load,pv,pv_to_load,pv_to_batt,batt_to_load,import,export,soc\n";
    for (std::size_t h = 0; h < t.load.size(); ++h)
        out << fmt::format("{},{},{},{},{},{},{},{},{}\n", h, t.load[h], t.pv[h], t.pv_to_load[h], t.pv_to_batt[h],
                           t.batt_to_load[h], t.import[h], t.export_[h], t.soc[h]);
}

}  // namespace solarev
