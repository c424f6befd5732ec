#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddmpc/metrics.hpp"
#include "ddmpc/scenario_io.hpp"
#include "ddmpc/svg.hpp"
#include "ddmpc/sweep.hpp"

namespace fs = std::filesystem;

namespace {

int outcome_exit(ddmpc::Outcome o) {
  switch (o) {
    case ddmpc::Outcome::success:
      return 0;
    case ddmpc::Outcome::timeout:
      return 2;
    case ddmpc::Outcome::collision:
      return 3;
  }
  return 1;
}

ddmpc::RunMetrics write_run_artifacts(const ddmpc::Scenario& scn,
                                      const ddmpc::TrajectoryLog& log,
                                      const fs::path& out_dir,
                                      const std::string& stem) {
  fs::create_directories(out_dir);
  ddmpc::write_text_file(out_dir / (stem + "_log.csv"), ddmpc::log_csv(log));
  const ddmpc::RunMetrics m = ddmpc::compute_run_metrics(log, scn);
  ddmpc::write_text_file(out_dir / (stem + "_metrics.csv"),
                         ddmpc::metrics_csv(m));
  ddmpc::write_text_file(out_dir / (stem + "_traj.svg"),
                         ddmpc::trajectory_svg(scn, log));
  return m;
}

void print_run_summary(const std::string& label, const ddmpc::RunMetrics& m) {
  std::cout << label << ": " << ddmpc::to_string(m.outcome) << " in "
            << ddmpc::format_double(m.total_time) << " s, position error "
            << ddmpc::format_double(m.euclidean_position_error)
            << " m, rotation error "
            << ddmpc::format_double(m.rotation_error) << " rad";
  if (m.min_obstacle_distance) {
    std::cout << ", min obstacle distance "
              << ddmpc::format_double(*m.min_obstacle_distance) << " m";
  }
  std::cout << ", max solve " << ddmpc::format_double(m.max_solve_time)
            << " s\n";
}

int cmd_run(const fs::path& file, std::optional<std::uint64_t> seed,
            const fs::path& out_dir) {
  ddmpc::Scenario scn = ddmpc::load_scenario(file);
  if (seed) scn.noise.seed = *seed;
  const ddmpc::TrajectoryLog log = ddmpc::run_scenario(scn);
  const ddmpc::RunMetrics m = write_run_artifacts(scn, log, out_dir, scn.name);
  print_run_summary(scn.name, m);
  return outcome_exit(log.outcome);
}

int cmd_sweep(const fs::path& file, const fs::path& out_dir, int jobs) {
  const ddmpc::SweepSpec spec = ddmpc::load_sweep(file);
  const std::vector<ddmpc::TableRow> rows = ddmpc::run_sweep(spec, jobs);
  const std::vector<ddmpc::AggregateRow> agg = ddmpc::aggregate_sweep(rows);
  fs::create_directories(out_dir);
  ddmpc::write_text_file(out_dir / "sweep.csv", ddmpc::sweep_csv(rows));
  ddmpc::write_text_file(out_dir / "sweep_aggregate.csv",
                         ddmpc::sweep_aggregate_csv(agg));
  int passing = 0;
  for (const ddmpc::AggregateRow& a : agg) passing += a.pass_all ? 1 : 0;
  std::cout << rows.size() << " runs over " << agg.size() << " (dt, N) cells, "
            << passing << " cells pass all criteria\n";
  for (const ddmpc::AggregateRow& a : agg) {
    std::cout << "  dt=" << ddmpc::format_double(a.dt) << " N=" << a.horizon
              << ": " << a.successes << "/" << a.runs
              << " succeeded, mean error "
              << ddmpc::format_double(a.mean_euclidean_error) << " m"
              << (a.pass_all ? ", pass" : ", fail") << "\n";
  }
  return 0;
}

int cmd_waypoints(const fs::path& file, const fs::path& out_dir, int trials) {
  const ddmpc::Scenario scn = ddmpc::load_scenario(file);
  std::vector<ddmpc::RunMetrics> metrics;
  metrics.reserve(static_cast<std::size_t>(trials));
  int worst = 0;
  for (int t = 0; t < trials; ++t) {
    ddmpc::Scenario trial = scn;
    trial.noise.seed = scn.noise.seed + static_cast<std::uint64_t>(t);
    const ddmpc::TrajectoryLog log = ddmpc::run_scenario(trial);
    const std::string stem = scn.name + "_trial" + std::to_string(t + 1);
    metrics.push_back(write_run_artifacts(trial, log, out_dir, stem));
    print_run_summary(stem, metrics.back());
    worst = std::max(worst, outcome_exit(log.outcome));
  }
  ddmpc::write_text_file(
      out_dir / "waypoint_metrics.csv",
      ddmpc::waypoint_metrics_csv(metrics, !scn.obstacles.empty()));
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Receding-horizon control experiments for a differential-drive "
               "vehicle"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string sweep_file;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int jobs = 1;
  int trials = 3;

  CLI::App* run = app.add_subcommand(
      "run", "Run one scenario; write log, metrics, and trajectory plot");
  run->add_option("scenario", scenario_file, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "Override the scenario's noise seed");
  run->add_option("--out", out_dir, "Output directory")
      ->capture_default_str();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a (dt, horizon) grid; write per-run and aggregate tables");
  sweep->add_option("sweepfile", sweep_file, "Sweep file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", out_dir, "Output directory")
      ->capture_default_str();
  sweep->add_option("--jobs", jobs, "Cells run in parallel")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  CLI::App* waypoints = app.add_subcommand(
      "waypoints", "Run a waypoint route over several seeds; write per-trial "
                   "artifacts and the trial-metrics table");
  waypoints->add_option("scenario", scenario_file, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  waypoints->add_option("--out", out_dir, "Output directory")
      ->capture_default_str();
  waypoints->add_option("--trials", trials, "Seeds to run")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      std::optional<std::uint64_t> seed_override;
      if (seed_opt->count() > 0) seed_override = seed;
      return cmd_run(scenario_file, seed_override, out_dir);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_file, out_dir, jobs);
    }
    if (waypoints->parsed()) {
      return cmd_waypoints(scenario_file, out_dir, trials);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
