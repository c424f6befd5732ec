#include <chrono>
#include <cmath>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "ddmpc/scenario_io.hpp"
#include "ddmpc/solver.hpp"
#include "ddmpc/sweep.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const std::string& name, double serial_s, double parallel_s,
            bool identical) {
  std::cout << name << ": serial " << ddmpc::format_double(serial_s)
            << " s, parallel " << ddmpc::format_double(parallel_s)
            << " s, speedup "
            << ddmpc::format_double(serial_s / parallel_s) << "x, results "
            << (identical ? "identical" : "DIFFER") << "\n";
}

ddmpc::Scenario bench_scenario() {
  ddmpc::Scenario scn;
  scn.name = "bench";
  scn.start = ddmpc::Pose{0.0, 0.0, 0.0};
  scn.plan.waypoints = {ddmpc::Pose{1.5, 0.0, 0.0}};
  scn.obstacles = {ddmpc::Obstacle{0.8, 0.1, 0.1}};
  scn.noise.control_noise_frac = 0.10;
  scn.noise.localization_sigma = 0.02;
  scn.noise.heading_sigma = 0.04;
  scn.noise.seed = 7;
  return scn;
}

bool rows_equal(const std::vector<ddmpc::TableRow>& a,
                const std::vector<ddmpc::TableRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // wall-clock fields excluded; everything else must match exactly
    if (a[i].dt != b[i].dt || a[i].horizon != b[i].horizon ||
        a[i].total_time != b[i].total_time ||
        a[i].euclidean_error != b[i].euclidean_error ||
        a[i].rotation_error != b[i].rotation_error ||
        a[i].outcome != b[i].outcome || a[i].seed != b[i].seed) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timing comparison of the serial and OpenMP execution paths"};
  int levels = 40;
  int horizon = 2;
  int jobs = 4;
  app.add_option("--levels", levels, "Grid levels per control axis")
      ->capture_default_str();
  app.add_option("--horizon", horizon, "Grid-search horizon")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "Parallel sweep jobs")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::cout << "OpenMP threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "OpenMP unavailable; both paths run serially\n";
#endif

  {
    ddmpc::OcpSpec spec;
    spec.horizon = horizon;
    spec.params.dt = 0.5;
    spec.reference.x_ref = ddmpc::Pose{1.5, 1.5, 0.0};
    spec.obstacles = {ddmpc::Obstacle{0.4, 0.4, 0.1}};
    const ddmpc::Pose x0{0.0, 0.0, 0.0};
    const double mu = 1e4;

    auto t0 = std::chrono::steady_clock::now();
    const ddmpc::SolveResult serial =
        ddmpc::solve_bruteforce(spec, x0, levels, mu, false);
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const ddmpc::SolveResult parallel =
        ddmpc::solve_bruteforce(spec, x0, levels, mu, true);
    const double parallel_s = seconds_since(t0);

    const bool same = serial.w_opt == parallel.w_opt &&
                      serial.cost == parallel.cost;
    report("grid search (" + std::to_string(serial.iterations) +
               " evaluations)",
           serial_s, parallel_s, same);
  }

  {
    ddmpc::SweepSpec spec;
    spec.base = bench_scenario();
    spec.dt_values = {0.5};
    spec.horizon_values = {5, 10, 15, 20};
    spec.trials_per_cell = 2;

    auto t0 = std::chrono::steady_clock::now();
    const auto serial_rows = ddmpc::run_sweep(spec, 1);
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto parallel_rows = ddmpc::run_sweep(spec, jobs);
    const double parallel_s = seconds_since(t0);

    report("sweep (" + std::to_string(serial_rows.size()) + " runs)",
           serial_s, parallel_s, rows_equal(serial_rows, parallel_rows));
  }

  return 0;
}
