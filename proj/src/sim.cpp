#include "ddmpc/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace ddmpc {

namespace {

bool finite(const Pose& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.theta);
}

// True collision: center distance below the hard radius, margin excluded.
bool in_collision(const Pose& p, const Scenario& scn) {
  for (const Obstacle& ob : scn.obstacles) {
    if (std::hypot(p.x - ob.x, p.y - ob.y) < scn.robot_radius + ob.radius) {
      return true;
    }
  }
  return false;
}

}  // namespace

OcpSpec Scenario::make_ocp_spec() const {
  OcpSpec spec;
  spec.horizon = horizon;
  spec.params.dt = dt;
  spec.bounds = bounds;
  spec.weights = weights;
  spec.obstacles = obstacles;
  spec.robot_radius = robot_radius;
  spec.safety_margin = safety_margin;
  return spec;
}

void Scenario::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt_s must be > 0");
  if (horizon < 1) throw std::invalid_argument("horizon_steps must be >= 1");
  if (!finite(start)) throw std::invalid_argument("start pose must be finite");
  if (plan.waypoints.empty()) {
    throw std::invalid_argument("waypoints must be nonempty");
  }
  for (const Pose& wp : plan.waypoints) {
    if (!finite(wp)) throw std::invalid_argument("waypoints must be finite");
  }
  if (robot_radius < 0.0) {
    throw std::invalid_argument("robot_radius_m must be >= 0");
  }
  if (safety_margin < 0.0) {
    throw std::invalid_argument("safety_margin_m must be >= 0");
  }
  for (const Obstacle& ob : obstacles) {
    if (ob.radius < 0.0 || !std::isfinite(ob.x) || !std::isfinite(ob.y)) {
      throw std::invalid_argument("obstacles must be finite with radius >= 0");
    }
  }
  if (!bounds.valid()) {
    throw std::invalid_argument(
        "bounds must satisfy v_min <= 0 <= v_max and omega_min <= 0 <= "
        "omega_max");
  }
  if (weights.q_x < 0.0 || weights.q_y < 0.0 || weights.q_theta < 0.0 ||
      weights.r_v < 0.0 || weights.r_omega < 0.0) {
    throw std::invalid_argument("weights must be >= 0");
  }
  if (weights.q_x <= 0.0 && weights.q_y <= 0.0 && weights.q_theta <= 0.0) {
    throw std::invalid_argument("at least one q weight must be > 0");
  }
  if (noise.control_noise_frac < 0.0 || noise.localization_sigma < 0.0 ||
      noise.heading_sigma < 0.0) {
    throw std::invalid_argument("noise parameters must be >= 0");
  }
  if (!criteria.valid()) {
    throw std::invalid_argument(
        "criteria (pos_tol_m, rot_tol_rad, max_time_s) must be > 0");
  }
  if (solver && !solver->valid()) {
    throw std::invalid_argument("solver config entries out of range");
  }
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::success:
      return "success";
    case Outcome::timeout:
      return "timeout";
    case Outcome::collision:
      return "collision";
  }
  return "unknown";
}

NoiseStreams::NoiseStreams(std::uint64_t seed) {
  // seed_seq works on 32-bit words; feed both halves so the full 64-bit seed
  // matters, with a distinct tag per stream.
  const std::uint32_t lo = static_cast<std::uint32_t>(seed);
  const std::uint32_t hi = static_cast<std::uint32_t>(seed >> 32);
  std::seed_seq control_seq{lo, hi, std::uint32_t{0x636f6e74u}};
  std::seed_seq pose_seq{lo, hi, std::uint32_t{0x6c6f6361u}};
  control_rng_.seed(control_seq);
  pose_rng_.seed(pose_seq);
}

double NoiseStreams::control_normal() { return control_unit_(control_rng_); }
double NoiseStreams::pose_normal() { return pose_unit_(pose_rng_); }

Control apply_control_noise(const Control& u, const NoiseModel& noise,
                            const ControlBounds& bounds,
                            NoiseStreams& streams) {
  if (!noise.any_control()) return u;
  const double ev = noise.control_noise_frac * streams.control_normal();
  const double ew = noise.control_noise_frac * streams.control_normal();
  return clamp_control(Control{u.v * (1.0 + ev), u.omega * (1.0 + ew)},
                       bounds);
}

Pose apply_localization_noise(const Pose& true_pose, const NoiseModel& noise,
                              NoiseStreams& streams) {
  if (!noise.any_pose()) return true_pose;
  const double nx = noise.localization_sigma * streams.pose_normal();
  const double ny = noise.localization_sigma * streams.pose_normal();
  const double nth = noise.heading_sigma * streams.pose_normal();
  return Pose{true_pose.x + nx, true_pose.y + ny, true_pose.theta + nth};
}

TrajectoryLog run_scenario(const Scenario& scn,
                           const std::optional<SolverConfig>& config) {
  scn.validate();
  const SolverConfig solver_cfg = config ? *config : scn.solver_config();

  Controller controller(scn.make_ocp_spec(), scn.plan, scn.criteria,
                        solver_cfg);
  NoiseStreams streams(scn.noise.seed);

  TrajectoryLog log;
  Pose truth = scn.start;
  bool pending_collision = in_collision(truth, scn);
  int k = 0;

  while (true) {
    const double t = k * scn.dt;
    const Pose measured = apply_localization_noise(truth, scn.noise, streams);

    controller.advance(measured);

    Outcome outcome{};
    bool done = false;
    if (pending_collision) {
      outcome = Outcome::collision;
      done = true;
    } else {
      switch (controller.state_at(measured)) {
        case RunState::success:
          outcome = Outcome::success;
          done = true;
          break;
        case RunState::timeout:
          outcome = Outcome::timeout;
          done = true;
          break;
        case RunState::running:
          break;
      }
    }
    if (done) {
      LogRow row;
      row.t = t;
      row.true_pose = truth;
      row.measured = measured;
      row.solver_status = to_string(outcome);
      log.rows.push_back(std::move(row));
      log.outcome = outcome;
      break;
    }

    auto [u_cmd, res] = controller.step(measured);
    const Control u_applied =
        apply_control_noise(u_cmd, scn.noise, scn.bounds, streams);

    LogRow row;
    row.t = t;
    row.control_applied = true;
    row.commanded = u_cmd;
    row.applied = u_applied;
    row.true_pose = truth;
    row.measured = measured;
    row.solve_time = res.solve_time;
    row.solver_status = to_string(res.status);
    log.rows.push_back(std::move(row));

    truth = euler_step(truth, u_applied, ModelParams{scn.dt});
    if (in_collision(truth, scn)) pending_collision = true;
    controller.tick(scn.dt);
    ++k;
  }
  return log;
}

}  // namespace ddmpc
