#pragma once

#include <optional>
#include <utility>

#include "ddmpc/sim.hpp"

namespace ddmpc {

struct RunMetrics {
  double euclidean_position_error{0.0};  // m, last true pose vs target
  double rotation_error{0.0};            // rad, in [0, pi]
  double max_trajectory_error{0.0};      // m, vs the waypoint polyline
  double avg_trajectory_error{0.0};      // m
  std::optional<double> min_obstacle_distance{};  // m, center-to-center
  double total_time{0.0};                // simulated s
  double max_solve_time{0.0};            // wall s
  Outcome outcome{Outcome::timeout};
};

// Distance from the last true pose to the target, and the wrapped absolute
// heading error.
std::pair<double, double> final_pose_errors(const TrajectoryLog& log,
                                            const Pose& target);

// Perpendicular distance of every logged true position to the waypoint
// polyline (consecutive duplicate (x,y) entries collapsed; a single point
// degenerates to point distance). Returns (max, mean).
std::pair<double, double> trajectory_errors(const TrajectoryLog& log,
                                            const WaypointPlan& plan);

// Minimum center-to-center distance over all logged true positions and
// obstacles. Requires at least one obstacle.
double min_obstacle_distance(const TrajectoryLog& log,
                             const std::vector<Obstacle>& obstacles);

// (total simulated time at termination, max per-row solver wall time)
std::pair<double, double> timing_stats(const TrajectoryLog& log);

// All of the above against the scenario's plan, final waypoint, and
// obstacles.
RunMetrics compute_run_metrics(const TrajectoryLog& log, const Scenario& scn);

}  // namespace ddmpc
