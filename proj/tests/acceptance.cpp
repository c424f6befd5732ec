// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Each block re-derives its expected values from first principles (finite
// differences, exhaustive grids, independent reruns) instead of trusting the
// code under test.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ddmpc/controller.hpp"
#include "ddmpc/metrics.hpp"
#include "ddmpc/scenario_io.hpp"
#include "ddmpc/sim.hpp"
#include "ddmpc/solver.hpp"
#include "ddmpc/sweep.hpp"
#include "test_support.hpp"

using namespace ddmpc;

namespace {

const std::string kDir = DDMPC_SCENARIO_DIR;
constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok{true};
  std::string detail;

  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      detail = msg;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

// ---- A1: three operating-point targets under actuation and pose noise ----

void a1_operating_point(Check& c) {
  for (const char* name :
       {"obstacle_free_straight.json", "obstacle_free_left.json",
        "obstacle_free_right.json"}) {
    const Scenario scn = load_scenario(kDir + "/" + name);
    const TrajectoryLog log = run_scenario(scn);
    const RunMetrics m = compute_run_metrics(log, scn);
    const std::string tag = scn.name + ": ";
    c.require(m.outcome == Outcome::success, tag + to_string(m.outcome));
    c.require(m.euclidean_position_error <= 0.4,
              tag + "position error " + fmt(m.euclidean_position_error));
    c.require(m.rotation_error <= 0.4,
              tag + "rotation error " + fmt(m.rotation_error));
    c.require(m.total_time <= 10.0, tag + "took " + fmt(m.total_time) + " s");
    for (const LogRow& row : log.rows) {
      c.require(row.solve_time < 0.5,
                tag + "solve took " + fmt(row.solve_time) + " s");
    }
  }
}

// ---- A2: three-obstacle course with zero true-clearance violations ----

void a2_obstacle_course(Check& c) {
  const Scenario scn = load_scenario(kDir + "/static_obstacles.json");
  const TrajectoryLog log = run_scenario(scn);
  c.require(log.outcome == Outcome::success, to_string(log.outcome));
  double min_clear = std::numeric_limits<double>::infinity();
  for (const LogRow& row : log.rows) {
    for (const Obstacle& ob : scn.obstacles) {
      min_clear = std::min(
          min_clear, std::hypot(row.true_pose.x - ob.x, row.true_pose.y - ob.y) -
                         (scn.robot_radius + ob.radius));
    }
  }
  c.require(min_clear >= 0.0,
            "true clearance dipped to " + fmt(min_clear) + " m");
}

// ---- A3: coarse sampling succeeds where fine sampling breaks down ----

void a3_sampling_trend(Check& c) {
  const SweepSpec sp = load_sweep(kDir + "/table1_sweep.json");
  const auto rows = run_sweep(sp, 1);
  const auto cells = aggregate_sweep(rows);
  bool fine_cell_failed = false;
  for (const AggregateRow& cell : cells) {
    if (cell.dt == 0.5) {
      c.require(cell.pass_all, "dt=0.5 N=" + std::to_string(cell.horizon) +
                                   " failed a criterion");
    }
    if (cell.dt <= 0.05 && !cell.pass_all) fine_cell_failed = true;
  }
  c.require(fine_cell_failed, "every dt <= 0.05 cell passed");
}

// ---- A4: long waypoint route, three seeds, averaged accuracy ----

void a4_waypoint_route(Check& c) {
  Scenario scn = load_scenario(kDir + "/waypoint_route.json");
  const std::uint64_t base_seed = scn.noise.seed;
  double sum_pos = 0.0;
  double sum_traj = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    scn.noise.seed = base_seed + static_cast<std::uint64_t>(trial);
    const TrajectoryLog log = run_scenario(scn);
    const RunMetrics m = compute_run_metrics(log, scn);
    c.require(m.outcome == Outcome::success,
              "trial " + std::to_string(trial + 1) + ": " +
                  to_string(m.outcome));
    sum_pos += m.euclidean_position_error;
    sum_traj += m.avg_trajectory_error;
  }
  const double avg_pos = sum_pos / 3.0;
  const double avg_traj = sum_traj / 3.0;
  c.require(avg_pos <= 0.2, "avg position error " + fmt(avg_pos) + " m");
  c.require(avg_traj <= 0.15, "avg trajectory error " + fmt(avg_traj) + " m");
}

// ---- A5: hand-derived gradient against central finite differences ----

void a5_gradient_oracle(Check& c) {
  test::Rng rng(906);
  int cases = 0;
  for (int n : {1, 5, 20}) {
    for (bool with_obs : {false, true}) {
      for (double mu : {0.0, 10.0, 1e3}) {
        for (int rep = 0; rep < 6; ++rep) {
          const OcpSpec spec = test::random_spec(rng, n, with_obs);
          const Pose x0 = test::random_pose(rng, 1.5);
          ControlSequence w = test::random_controls(rng, n, spec.bounds);
          const auto grad = objective_gradient(spec, x0, w, mu);
          const double h = 1e-6;
          for (std::size_t k = 0; k < w.size(); ++k) {
            for (bool wrt_v : {true, false}) {
              double& slot = wrt_v ? w[k].v : w[k].omega;
              const double saved = slot;
              slot = saved + h;
              const double hi = penalized_objective(spec, x0, w, mu);
              slot = saved - h;
              const double lo = penalized_objective(spec, x0, w, mu);
              slot = saved;
              const double fd = (hi - lo) / (2.0 * h);
              const double adj = wrt_v ? grad[k].dv : grad[k].domega;
              const double tol = 1e-8 + 1e-5 * std::max(1.0, std::abs(fd));
              c.require(std::abs(adj - fd) <= tol,
                        "N=" + std::to_string(n) + " mu=" + fmt(mu) +
                            ": adjoint " + fmt(adj) + " vs fd " + fmt(fd));
            }
          }
          ++cases;
        }
      }
    }
  }
  c.require(cases >= 100, "only " + std::to_string(cases) + " cases");
}

// ---- A6: descent result against an exhaustive control grid ----

void a6_solver_oracle(Check& c) {
  test::Rng rng(907);
  const int levels = 21;
  int instances = 0;
  while (instances < 24) {
    const int n = 1 + (instances % 2);
    const OcpSpec spec = test::random_spec(rng, n, instances % 3 == 0);
    const Pose x0 = test::random_pose(rng, 1.0);
    SolverConfig config;
    config.time_budget = 30.0;
    const double mu = config.final_mu();

    const auto grid = solve_bruteforce(spec, x0, levels, mu);
    const auto cont = solve(spec, x0, ControlSequence(n), config);
    const double slack = test::one_cell_slack(spec, x0, grid.w_opt, levels, mu);
    c.require(cont.cost <= grid.cost + slack + 1e-9,
              "instance " + std::to_string(instances) + ": solve " +
                  fmt(cont.cost) + " vs grid " + fmt(grid.cost) + " + slack " +
                  fmt(slack));
    ++instances;
  }
}

// ---- A7: module invariants as randomized property suites ----

void a7_invariants(Check& c) {
  // Zero control is a fixed point of the dynamics.
  {
    test::Rng rng(911);
    for (int i = 0; i < 200; ++i) {
      const Pose p = test::random_pose(rng, 20.0);
      const Pose next = euler_step(p, Control{0, 0},
                                   ModelParams{rng.uniform(0.01, 2.0)});
      c.require(next == p, "zero-control fixed point violated");
    }
  }
  // Rotating the world frame commutes with the dynamics.
  {
    test::Rng rng(912);
    for (int i = 0; i < 150; ++i) {
      const Pose s = test::random_pose(rng, 5.0);
      const Control u{rng.uniform(-1, 1), rng.uniform(-2, 2)};
      const ModelParams p{rng.uniform(0.05, 1.0)};
      const double phi = rng.uniform(-kPi, kPi);
      const double cs = std::cos(phi), sn = std::sin(phi);
      auto rot = [&](const Pose& q) {
        return Pose{cs * q.x - sn * q.y, sn * q.x + cs * q.y, q.theta + phi};
      };
      const Pose a = rot(euler_step(s, u, p));
      const Pose b = euler_step(rot(s), u, p);
      c.require(std::abs(a.x - b.x) < 1e-9 && std::abs(a.y - b.y) < 1e-9 &&
                    std::abs(a.theta - b.theta) < 1e-9,
                "rotation equivariance violated");
    }
  }
  // wrap_angle lands in (-pi, pi] and is idempotent.
  {
    test::Rng rng(913);
    for (int i = 0; i < 300; ++i) {
      const double a = rng.uniform(-100, 100);
      const double r = wrap_angle(a);
      c.require(r > -kPi && r <= kPi, "wrap_angle out of range");
      c.require(wrap_angle(r) == r, "wrap_angle not idempotent");
    }
  }
  // Costs are nonnegative, zero exactly at the reference.
  {
    test::Rng rng(914);
    for (int i = 0; i < 200; ++i) {
      const OcpSpec spec = test::random_spec(rng, 6, false);
      const Pose x0 = test::random_pose(rng);
      const auto w = test::random_controls(rng, 6, spec.bounds);
      c.require(total_cost(spec, x0, w) >= 0.0, "negative cost");
    }
    for (int i = 0; i < 100; ++i) {
      OcpSpec spec = test::random_spec(rng, 4, false);
      c.require(total_cost(spec, spec.reference.x_ref,
                           ControlSequence(4, Control{0, 0})) == 0.0,
                "cost not zero at the reference");
      Pose off = spec.reference.x_ref;
      off.x += rng.uniform(0.01, 1.0);  // q_x > 0 by construction
      c.require(total_cost(spec, off, ControlSequence(4, Control{0, 0})) > 0.0,
                "cost zero away from the reference");
    }
  }
  // The exterior penalty is monotone in mu.
  {
    test::Rng rng(915);
    for (int i = 0; i < 100; ++i) {
      const OcpSpec spec = test::random_spec(rng, 6, true);
      const Pose x0 = test::random_pose(rng, 1.0);
      const auto w = test::random_controls(rng, 6, spec.bounds);
      const double lo = rng.uniform(0.0, 50.0);
      const double hi = lo + rng.uniform(0.0, 1e3);
      c.require(penalized_objective(spec, x0, w, lo) <=
                    penalized_objective(spec, x0, w, hi) + 1e-12,
                "penalty not monotone in mu");
    }
  }
  // The controller's warm start keeps the horizon length, step after step.
  {
    test::Rng rng(916);
    SolverConfig quick;
    quick.max_outer_iters = 2;
    quick.max_inner_iters = 40;
    quick.time_budget = 10.0;
    for (int i = 0; i < 100; ++i) {
      OcpSpec spec;
      spec.horizon = rng.pick(1, 8);
      spec.params.dt = 0.5;
      Controller ctl(spec, WaypointPlan{{Pose{2.0, rng.uniform(-1, 1), 0}}},
                     TerminationCriteria{}, quick);
      Pose measured{0, 0, 0};
      for (int s = 0; s < 2; ++s) {
        const auto [u, res] = ctl.step(measured);
        c.require(res.w_opt.size() ==
                      static_cast<std::size_t>(spec.horizon),
                  "solution length changed");
        c.require(ctl.internal_state().last_solution.size() ==
                      static_cast<std::size_t>(spec.horizon),
                  "warm start length changed");
        measured = euler_step(measured, u, spec.params);
        ctl.tick(spec.params.dt);
      }
    }
  }
  // One seed, one trajectory: reruns agree bit for bit.
  {
    test::Rng rng(917);
    SolverConfig quick;
    quick.max_outer_iters = 2;
    quick.max_inner_iters = 40;
    quick.time_budget = 10.0;
    for (int i = 0; i < 100; ++i) {
      Scenario scn;
      scn.name = "repro";
      scn.horizon = 5;
      scn.start = Pose{0, 0, 0};
      scn.plan.waypoints = {test::random_pose(rng, 1.5)};
      scn.criteria.max_time = 3.0;
      scn.noise.control_noise_frac = 0.1;
      scn.noise.localization_sigma = 0.02;
      scn.noise.heading_sigma = 0.04;
      scn.noise.seed = static_cast<std::uint64_t>(rng.pick(1, 1 << 20));
      if (i % 3 == 0) scn.obstacles = {Obstacle{0.8, 0.8, 0.1}};
      const TrajectoryLog a = run_scenario(scn, quick);
      const TrajectoryLog b = run_scenario(scn, quick);
      bool same = a.outcome == b.outcome && a.rows.size() == b.rows.size();
      for (std::size_t k = 0; same && k < a.rows.size(); ++k) {
        same = a.rows[k].true_pose == b.rows[k].true_pose &&
               a.rows[k].measured == b.rows[k].measured &&
               a.rows[k].applied == b.rows[k].applied;
      }
      c.require(same, "seeded rerun diverged");
    }
  }
  // Metrics ignore a joint translation of the world.
  {
    test::Rng rng(918);
    for (int i = 0; i < 100; ++i) {
      Scenario scn;
      scn.plan.waypoints.clear();
      for (int k = 0, wps = rng.pick(1, 4); k < wps; ++k) {
        scn.plan.waypoints.push_back(test::random_pose(rng, 2.0));
      }
      scn.obstacles = {Obstacle{rng.uniform(-2, 2), rng.uniform(-2, 2),
                                rng.uniform(0.05, 0.3)}};
      TrajectoryLog log;
      for (int k = 0, rows = rng.pick(1, 10); k < rows; ++k) {
        LogRow row;
        row.t = 0.5 * k;
        row.true_pose = test::random_pose(rng, 3.0);
        log.rows.push_back(row);
      }
      const RunMetrics base = compute_run_metrics(log, scn);
      const double sx = rng.uniform(-20, 20), sy = rng.uniform(-20, 20);
      for (Pose& wp : scn.plan.waypoints) {
        wp.x += sx;
        wp.y += sy;
      }
      for (Obstacle& ob : scn.obstacles) {
        ob.x += sx;
        ob.y += sy;
      }
      for (LogRow& row : log.rows) {
        row.true_pose.x += sx;
        row.true_pose.y += sy;
      }
      const RunMetrics moved = compute_run_metrics(log, scn);
      const double err =
          std::abs(moved.euclidean_position_error -
                   base.euclidean_position_error) +
          std::abs(moved.rotation_error - base.rotation_error) +
          std::abs(moved.max_trajectory_error - base.max_trajectory_error) +
          std::abs(moved.avg_trajectory_error - base.avg_trajectory_error) +
          std::abs(*moved.min_obstacle_distance - *base.min_obstacle_distance);
      c.require(err < 1e-8, "metrics shifted under translation");
    }
  }
  // The mean deviation can never exceed the worst deviation.
  {
    test::Rng rng(919);
    for (int i = 0; i < 100; ++i) {
      WaypointPlan plan;
      for (int k = 0, wps = rng.pick(1, 4); k < wps; ++k) {
        plan.waypoints.push_back(test::random_pose(rng, 2.0));
      }
      TrajectoryLog log;
      for (int k = 0, rows = rng.pick(1, 12); k < rows; ++k) {
        LogRow row;
        row.true_pose = test::random_pose(rng, 3.0);
        log.rows.push_back(row);
      }
      const auto [worst, avg] = trajectory_errors(log, plan);
      c.require(avg <= worst + 1e-12, "mean deviation exceeded the maximum");
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria{
      {"A1 operating-point targets", 5.0, a1_operating_point},
      {"A2 obstacle course", 5.0, a2_obstacle_course},
      {"A3 sampling-interval trend", 180.0, a3_sampling_trend},
      {"A4 waypoint route accuracy", 120.0, a4_waypoint_route},
      {"A5 gradient vs finite differences", 10.0, a5_gradient_oracle},
      {"A6 solver vs exhaustive grid", 60.0, a6_solver_oracle},
      {"A7 module invariants", 60.0, a7_invariants},
  };

  int failures = 0;
  for (const Criterion& cr : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (elapsed > cr.budget_s) {
      c.require(false, "runtime " + fmt(elapsed) + " s over the " +
                           fmt(cr.budget_s) + " s budget");
    }
    if (c.ok) {
      std::printf("[PASS] %s (%.1fs)\n", cr.name, elapsed);
    } else {
      std::printf("[FAIL] %s (%.1fs): %s\n", cr.name, elapsed,
                  c.detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
