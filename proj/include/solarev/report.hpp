#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "solarev/optimizer.hpp"

namespace solarev {

/// One line of the results table: an item, up to three conditions, one value per year.
struct ReportLine {
    std::string item;
    std::string condition1, condition2, condition3;
    std::vector<std::optional<double>> values;
};

struct ReportTable {
    std::vector<int> years;
    std::vector<ReportLine> lines;
};

/// Lays trajectories out as a results table: technology cost rows first, then
/// one block per item with a line per trajectory. All trajectories must cover
/// the same years.
ReportTable build_report(const std::vector<Trajectory>& trajectories);

/// `item,condition1,condition2,condition3,y2020,...` at full precision.
void write_report_csv(const std::filesystem::path& path, const ReportTable& table);

/// Aligned text table; percentages, payback and IRR rounded to integers.
void write_report_text(const std::filesystem::path& path, const ReportTable& table);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

void write_fleet_experiment_csv(const std::filesystem::path& path, const std::vector<FleetExperimentRow>& rows);

void write_trace_csv(const std::filesystem::path& path, const HourlyTrace& trace);

/// Shortest round-trip decimal form; empty for none.
std::string format_number(std::optional<double> v);

}  // namespace solarev
