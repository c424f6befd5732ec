#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ddmpc/solver.hpp"

namespace ddmpc {

struct TerminationCriteria {
  double pos_tol{0.4};     // m, Euclidean distance to target
  double rot_tol{0.4};     // rad
  double max_time{10.0};   // simulated-time budget, s

  bool valid() const {
    return pos_tol > 0.0 && rot_tol > 0.0 && max_time > 0.0;
  }

  friend bool operator==(const TerminationCriteria&,
                         const TerminationCriteria&) = default;
};

struct WaypointPlan {
  std::vector<Pose> waypoints;

  friend bool operator==(const WaypointPlan&, const WaypointPlan&) = default;
};

enum class RunState { running, success, timeout };

struct ControllerState {
  std::size_t waypoint_index{0};
  ControlSequence last_solution;  // warm start, always length N
  double elapsed{0.0};            // simulated seconds
};

// Both position and heading must be inside tolerance.
bool waypoint_reached(const Pose& measured, const Pose& waypoint,
                      const TerminationCriteria& criteria);

// Advances the active-waypoint index when the measured pose is inside both
// tolerances, saturating at the last waypoint.
ControllerState advance_waypoint(ControllerState st, const WaypointPlan& plan,
                                 const Pose& measured,
                                 const TerminationCriteria& criteria);

// success only at the final waypoint; timeout once the simulated clock hits
// the budget without success.
RunState run_state(const ControllerState& st, const WaypointPlan& plan,
                   const Pose& measured, const TerminationCriteria& criteria);

// Receding-horizon loop: solve the OCP from the measured state toward the
// active waypoint, apply the first control, shift the solution for the next
// warm start.
class Controller {
 public:
  Controller(OcpSpec base, WaypointPlan plan, TerminationCriteria criteria,
             SolverConfig config);

  // One control update. Throws std::logic_error if called after the run has
  // already terminated for this measurement.
  std::pair<Control, SolveResult> step(const Pose& measured);

  void advance(const Pose& measured);
  RunState state_at(const Pose& measured) const;
  void tick(double dt) { st_.elapsed += dt; }

  const Pose& active_waypoint() const {
    return plan_.waypoints[st_.waypoint_index];
  }
  const ControllerState& internal_state() const { return st_; }
  const WaypointPlan& plan() const { return plan_; }
  const TerminationCriteria& criteria() const { return criteria_; }
  const OcpSpec& base_spec() const { return base_; }

 private:
  OcpSpec base_;
  WaypointPlan plan_;
  TerminationCriteria criteria_;
  SolverConfig config_;
  ControllerState st_;
};

}  // namespace ddmpc
