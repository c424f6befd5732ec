#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ddmpc {

// Planar vehicle pose. Heading is stored unwrapped; angular comparisons go
// through wrap_angle so the dynamics stay differentiable along a rollout.
struct Pose {
  double x{0.0};      // m
  double y{0.0};      // m
  double theta{0.0};  // rad

  friend bool operator==(const Pose&, const Pose&) = default;
};

// Velocity command: linear (m/s) and angular (rad/s).
struct Control {
  double v{0.0};
  double omega{0.0};

  friend bool operator==(const Control&, const Control&) = default;
};

// Box bounds on controls. Zero must be inside the box so stopping is always
// feasible.
struct ControlBounds {
  double v_min{-0.6};
  double v_max{0.6};
  double omega_min{-std::numbers::pi / 2};
  double omega_max{std::numbers::pi / 2};

  bool valid() const {
    return v_min <= 0.0 && 0.0 <= v_max && omega_min <= 0.0 && 0.0 <= omega_max;
  }

  friend bool operator==(const ControlBounds&, const ControlBounds&) = default;
};

struct ModelParams {
  double dt{0.5};  // sampling time, s

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Maps an angle to the equivalent value in (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

// One explicit Euler step of the unicycle kinematics. The heading is not
// wrapped here; wrapping inside the dynamics would put kinks in the rollout.
inline Pose euler_step(const Pose& s, const Control& u, const ModelParams& p) {
  return Pose{s.x + p.dt * u.v * std::cos(s.theta),
              s.y + p.dt * u.v * std::sin(s.theta),
              s.theta + p.dt * u.omega};
}

// Componentwise projection onto the control box. Idempotent.
inline Control clamp_control(const Control& u, const ControlBounds& b) {
  return Control{std::clamp(u.v, b.v_min, b.v_max),
                 std::clamp(u.omega, b.omega_min, b.omega_max)};
}

}  // namespace ddmpc
