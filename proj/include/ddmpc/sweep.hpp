#pragma once

#include "ddmpc/metrics.hpp"

namespace ddmpc {

// Grid study over (dt, horizon) cells. Each cell runs every target with
// every trial seed.
struct SweepSpec {
  Scenario base;
  std::vector<double> dt_values;
  std::vector<int> horizon_values;
  int trials_per_cell{1};
  std::vector<std::uint64_t> seeds;  // per trial; derived from base when short
  std::vector<Pose> targets;         // defaults to the base plan's last waypoint

  void validate() const;
  std::uint64_t trial_seed(int trial) const;
};

// One run of one cell. Pass flags encode the paper-style criteria: finished
// in time, every solve under the sampling interval, and both final-pose
// thresholds.
struct TableRow {
  double dt{0.0};
  int horizon{0};
  double total_time{0.0};       // simulated s
  double max_solve_time{0.0};   // wall s
  double euclidean_error{0.0};  // m
  double rotation_error{0.0};   // rad
  Outcome outcome{Outcome::timeout};
  int target_index{0};
  int trial{0};
  std::uint64_t seed{0};
  bool pass_total_time{false};
  bool pass_solve_time{false};
  bool pass_position{false};
  bool pass_rotation{false};

  bool pass_all() const {
    return pass_total_time && pass_solve_time && pass_position &&
           pass_rotation;
  }
};

// Per-(dt, horizon) aggregation: mean and worst of each metric over all
// targets and trials in the cell.
struct AggregateRow {
  double dt{0.0};
  int horizon{0};
  int runs{0};
  int successes{0};
  double mean_total_time{0.0};
  double worst_total_time{0.0};
  double mean_max_solve_time{0.0};
  double worst_max_solve_time{0.0};
  double mean_euclidean_error{0.0};
  double worst_euclidean_error{0.0};
  double mean_rotation_error{0.0};
  double worst_rotation_error{0.0};
  bool pass_all{false};  // every run in the cell passed every criterion
};

// Builds the concrete scenario for one (dt, horizon, target, trial) run.
Scenario sweep_cell_scenario(const SweepSpec& spec, double dt, int horizon,
                             const Pose& target, int trial);

// Runs the whole grid. Rows come back sorted by (dt index, horizon index,
// target, trial) regardless of execution order; jobs > 1 runs cells in
// parallel via OpenMP, jobs == 1 is the serial reference.
std::vector<TableRow> run_sweep(const SweepSpec& spec, int jobs);

std::vector<AggregateRow> aggregate_sweep(const std::vector<TableRow>& rows);

}  // namespace ddmpc
