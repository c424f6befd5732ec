#pragma once

#include <filesystem>
#include <string>

#include "ddmpc/sweep.hpp"

namespace ddmpc {

// Human-editable JSON with units spelled out in the key names (dt_s,
// pos_tol_m, ...). Angles are radians, numbers plain decimals.
Scenario scenario_from_json_text(const std::string& text,
                                 const std::string& origin = "<string>");
std::string scenario_to_json_text(const Scenario& scn);
Scenario load_scenario(const std::filesystem::path& file);
void save_scenario(const Scenario& scn, const std::filesystem::path& file);

SweepSpec sweep_from_json_text(const std::string& text,
                               const std::string& origin = "<string>");
SweepSpec load_sweep(const std::filesystem::path& file);

// Shortest-round-trip decimal formatting; identical bytes for identical
// doubles.
std::string format_double(double v);

std::string log_csv(const TrajectoryLog& log);
std::string metrics_csv(const RunMetrics& m);
std::string sweep_csv(const std::vector<TableRow>& rows);
std::string sweep_aggregate_csv(const std::vector<AggregateRow>& rows);
// Table-3/4 style per-trial table with a trailing average row.
std::string waypoint_metrics_csv(const std::vector<RunMetrics>& trials,
                                 bool with_obstacles);

void write_text_file(const std::filesystem::path& file,
                     const std::string& content);

}  // namespace ddmpc
