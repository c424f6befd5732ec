#include "ddmpc/sweep.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ddmpc {

void SweepSpec::validate() const {
  base.validate();
  if (dt_values.empty()) throw std::invalid_argument("dt_values_s is empty");
  if (horizon_values.empty()) {
    throw std::invalid_argument("horizon_values is empty");
  }
  for (double dt : dt_values) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt_values_s must be > 0");
  }
  for (int n : horizon_values) {
    if (n < 1) throw std::invalid_argument("horizon_values must be >= 1");
  }
  if (trials_per_cell < 1) {
    throw std::invalid_argument("trials_per_cell must be >= 1");
  }
}

std::uint64_t SweepSpec::trial_seed(int trial) const {
  if (static_cast<std::size_t>(trial) < seeds.size()) {
    return seeds[static_cast<std::size_t>(trial)];
  }
  return base.noise.seed + static_cast<std::uint64_t>(trial);
}

Scenario sweep_cell_scenario(const SweepSpec& spec, double dt, int horizon,
                             const Pose& target, int trial) {
  Scenario scn = spec.base;
  scn.dt = dt;
  scn.horizon = horizon;
  scn.plan.waypoints = {target};
  scn.noise.seed = spec.trial_seed(trial);
  if (!scn.solver) {
    scn.solver = SolverConfig::defaults_for(dt);
  }
  // The budget tracks the cell's sampling interval, never the base fixture's.
  scn.solver->time_budget = SolverConfig::defaults_for(dt).time_budget;
  return scn;
}

std::vector<TableRow> run_sweep(const SweepSpec& spec, int jobs) {
  spec.validate();
  const std::vector<Pose> targets =
      spec.targets.empty() ? std::vector<Pose>{spec.base.plan.waypoints.back()}
                           : spec.targets;

  const int n_dt = static_cast<int>(spec.dt_values.size());
  const int n_h = static_cast<int>(spec.horizon_values.size());
  const int n_tg = static_cast<int>(targets.size());
  const int n_tr = spec.trials_per_cell;
  const int total = n_dt * n_h * n_tg * n_tr;

  std::vector<TableRow> rows(static_cast<std::size_t>(total));
  jobs = std::max(1, jobs);

  // flat index -> (dt, horizon, target, trial); rows land pre-sorted
  auto run_one = [&](int idx) {
    int rest = idx;
    const int trial = rest % n_tr;
    rest /= n_tr;
    const int tg = rest % n_tg;
    rest /= n_tg;
    const int h = rest % n_h;
    const int d = rest / n_h;

    const double dt = spec.dt_values[static_cast<std::size_t>(d)];
    const int horizon = spec.horizon_values[static_cast<std::size_t>(h)];
    const Scenario scn = sweep_cell_scenario(
        spec, dt, horizon, targets[static_cast<std::size_t>(tg)], trial);

    const TrajectoryLog log = run_scenario(scn);
    const RunMetrics m = compute_run_metrics(log, scn);

    TableRow row;
    row.dt = dt;
    row.horizon = horizon;
    row.total_time = m.total_time;
    row.max_solve_time = m.max_solve_time;
    row.euclidean_error = m.euclidean_position_error;
    row.rotation_error = m.rotation_error;
    row.outcome = m.outcome;
    row.target_index = tg;
    row.trial = trial;
    row.seed = scn.noise.seed;
    row.pass_total_time = m.outcome == Outcome::success &&
                          m.total_time <= scn.criteria.max_time;
    row.pass_solve_time = m.max_solve_time < dt;
    row.pass_position =
        m.euclidean_position_error <= scn.criteria.pos_tol;
    row.pass_rotation = m.rotation_error <= scn.criteria.rot_tol;
    rows[static_cast<std::size_t>(idx)] = std::move(row);
  };

#ifdef _OPENMP
  if (jobs > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
    for (int idx = 0; idx < total; ++idx) run_one(idx);
    return rows;
  }
#endif
  for (int idx = 0; idx < total; ++idx) run_one(idx);
  return rows;
}

std::vector<AggregateRow> aggregate_sweep(const std::vector<TableRow>& rows) {
  // keyed by first appearance so aggregate order follows row order
  std::vector<AggregateRow> out;
  std::map<std::pair<double, int>, std::size_t> index;
  for (const TableRow& r : rows) {
    const auto key = std::make_pair(r.dt, r.horizon);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.size());
      AggregateRow agg;
      agg.dt = r.dt;
      agg.horizon = r.horizon;
      agg.pass_all = true;
      out.push_back(agg);
      it = index.find(key);
    }
    AggregateRow& agg = out[it->second];
    agg.runs += 1;
    agg.successes += r.outcome == Outcome::success ? 1 : 0;
    agg.mean_total_time += r.total_time;
    agg.mean_max_solve_time += r.max_solve_time;
    agg.mean_euclidean_error += r.euclidean_error;
    agg.mean_rotation_error += r.rotation_error;
    agg.worst_total_time = std::max(agg.worst_total_time, r.total_time);
    agg.worst_max_solve_time =
        std::max(agg.worst_max_solve_time, r.max_solve_time);
    agg.worst_euclidean_error =
        std::max(agg.worst_euclidean_error, r.euclidean_error);
    agg.worst_rotation_error =
        std::max(agg.worst_rotation_error, r.rotation_error);
    agg.pass_all = agg.pass_all && r.pass_all();
  }
  for (AggregateRow& agg : out) {
    const double n = std::max(1, agg.runs);
    agg.mean_total_time /= n;
    agg.mean_max_solve_time /= n;
    agg.mean_euclidean_error /= n;
    agg.mean_rotation_error /= n;
  }
  return out;
}

}  // namespace ddmpc
