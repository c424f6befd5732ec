#include "ddmpc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddmpc {

namespace {

double point_segment_distance(double px, double py, double ax, double ay,
                              double bx, double by) {
  const double vx = bx - ax;
  const double vy = by - ay;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) return std::hypot(px - ax, py - ay);
  double t = ((px - ax) * vx + (py - ay) * vy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (ax + t * vx), py - (ay + t * vy));
}

// Waypoints sharing (x,y) (in-place rotations) contribute no segment.
std::vector<Pose> collapse_duplicates(const std::vector<Pose>& wps) {
  std::vector<Pose> out;
  for (const Pose& wp : wps) {
    if (out.empty() || out.back().x != wp.x || out.back().y != wp.y) {
      out.push_back(wp);
    }
  }
  return out;
}

}  // namespace

std::pair<double, double> final_pose_errors(const TrajectoryLog& log,
                                            const Pose& target) {
  if (log.rows.empty()) {
    throw std::invalid_argument("final_pose_errors: empty log");
  }
  const Pose& last = log.rows.back().true_pose;
  return {std::hypot(last.x - target.x, last.y - target.y),
          std::abs(wrap_angle(last.theta - target.theta))};
}

std::pair<double, double> trajectory_errors(const TrajectoryLog& log,
                                            const WaypointPlan& plan) {
  if (plan.waypoints.empty()) {
    throw std::invalid_argument("trajectory_errors: empty plan");
  }
  if (log.rows.empty()) return {0.0, 0.0};

  const auto path = collapse_duplicates(plan.waypoints);
  double worst = 0.0;
  double sum = 0.0;
  for (const LogRow& row : log.rows) {
    const Pose& p = row.true_pose;
    double best = std::numeric_limits<double>::infinity();
    if (path.size() == 1) {
      best = std::hypot(p.x - path[0].x, p.y - path[0].y);
    } else {
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        best = std::min(best,
                        point_segment_distance(p.x, p.y, path[i].x, path[i].y,
                                               path[i + 1].x, path[i + 1].y));
      }
    }
    worst = std::max(worst, best);
    sum += best;
  }
  return {worst, sum / static_cast<double>(log.rows.size())};
}

double min_obstacle_distance(const TrajectoryLog& log,
                             const std::vector<Obstacle>& obstacles) {
  if (obstacles.empty()) {
    throw std::invalid_argument("min_obstacle_distance: no obstacles");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const LogRow& row : log.rows) {
    for (const Obstacle& ob : obstacles) {
      best = std::min(best, std::hypot(row.true_pose.x - ob.x,
                                       row.true_pose.y - ob.y));
    }
  }
  return best;
}

std::pair<double, double> timing_stats(const TrajectoryLog& log) {
  if (log.rows.empty()) {
    throw std::invalid_argument("timing_stats: empty log");
  }
  double max_solve = 0.0;
  for (const LogRow& row : log.rows) {
    max_solve = std::max(max_solve, row.solve_time);
  }
  return {log.rows.back().t, max_solve};
}

RunMetrics compute_run_metrics(const TrajectoryLog& log, const Scenario& scn) {
  RunMetrics m;
  const auto [pos_err, rot_err] =
      final_pose_errors(log, scn.plan.waypoints.back());
  m.euclidean_position_error = pos_err;
  m.rotation_error = rot_err;
  const auto [max_traj, avg_traj] = trajectory_errors(log, scn.plan);
  m.max_trajectory_error = max_traj;
  m.avg_trajectory_error = avg_traj;
  if (!scn.obstacles.empty()) {
    m.min_obstacle_distance = min_obstacle_distance(log, scn.obstacles);
  }
  const auto [total, max_solve] = timing_stats(log);
  m.total_time = total;
  m.max_solve_time = max_solve;
  m.outcome = log.outcome;
  return m;
}

}  // namespace ddmpc
