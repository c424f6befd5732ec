#include "ddmpc/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace ddmpc {

bool waypoint_reached(const Pose& measured, const Pose& waypoint,
                      const TerminationCriteria& criteria) {
  const double dist = std::hypot(measured.x - waypoint.x,
                                 measured.y - waypoint.y);
  const double rot = std::abs(wrap_angle(measured.theta - waypoint.theta));
  return dist <= criteria.pos_tol && rot <= criteria.rot_tol;
}

ControllerState advance_waypoint(ControllerState st, const WaypointPlan& plan,
                                 const Pose& measured,
                                 const TerminationCriteria& criteria) {
  if (st.waypoint_index + 1 < plan.waypoints.size() &&
      waypoint_reached(measured, plan.waypoints[st.waypoint_index], criteria)) {
    ++st.waypoint_index;
  }
  return st;
}

RunState run_state(const ControllerState& st, const WaypointPlan& plan,
                   const Pose& measured, const TerminationCriteria& criteria) {
  if (st.waypoint_index + 1 == plan.waypoints.size() &&
      waypoint_reached(measured, plan.waypoints.back(), criteria)) {
    return RunState::success;
  }
  if (st.elapsed >= criteria.max_time) return RunState::timeout;
  return RunState::running;
}

Controller::Controller(OcpSpec base, WaypointPlan plan,
                       TerminationCriteria criteria, SolverConfig config)
    : base_(std::move(base)),
      plan_(std::move(plan)),
      criteria_(criteria),
      config_(config) {
  if (plan_.waypoints.empty()) {
    throw std::invalid_argument("Controller: waypoint plan is empty");
  }
  st_.last_solution.assign(static_cast<std::size_t>(base_.horizon), Control{});
}

std::pair<Control, SolveResult> Controller::step(const Pose& measured) {
  if (state_at(measured) != RunState::running) {
    throw std::logic_error("Controller::step called after termination");
  }

  OcpSpec spec = base_;
  spec.reference = Reference{active_waypoint(), Control{}};

  // Shift-left warm start, final entry duplicated.
  ControlSequence warm = st_.last_solution;
  if (warm.size() > 1) {
    for (std::size_t i = 0; i + 1 < warm.size(); ++i) warm[i] = warm[i + 1];
  }

  SolveResult res = solve(spec, measured, warm, config_);
  st_.last_solution = res.w_opt;
  const Control u0 = clamp_control(res.w_opt.front(), base_.bounds);
  return {u0, std::move(res)};
}

void Controller::advance(const Pose& measured) {
  st_ = advance_waypoint(std::move(st_), plan_, measured, criteria_);
}

RunState Controller::state_at(const Pose& measured) const {
  return run_state(st_, plan_, measured, criteria_);
}

}  // namespace ddmpc
