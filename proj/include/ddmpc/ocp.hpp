#pragma once

#include <vector>

#include "ddmpc/model.hpp"

namespace ddmpc {

// Diagonal weights of the quadratic stage cost.
struct Weights {
  double q_x{1.0};
  double q_y{5.0};
  double q_theta{0.1};
  double r_v{0.5};
  double r_omega{0.05};

  friend bool operator==(const Weights&, const Weights&) = default;
};

struct Reference {
  Pose x_ref{};
  Control u_ref{};  // default (0,0): drive to rest

  friend bool operator==(const Reference&, const Reference&) = default;
};

// Circular keep-out region.
struct Obstacle {
  double x{0.0};
  double y{0.0};
  double radius{0.0};

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

// The finite-horizon problem: dynamics parameters, weights, reference,
// obstacle geometry. Immutable once built; shareable across threads.
struct OcpSpec {
  int horizon{20};  // N
  ModelParams params{};
  ControlBounds bounds{};
  Weights weights{};
  Reference reference{};
  std::vector<Obstacle> obstacles{};
  double robot_radius{0.15};  // m
  double safety_margin{0.05};  // m

  // Minimum permitted center distance to an obstacle.
  double keepout_radius(const Obstacle& ob) const {
    return robot_radius + ob.radius + safety_margin;
  }
};

// The decision variable: one control per horizon step.
using ControlSequence = std::vector<Control>;

// Objective derivative with respect to one control entry.
struct ControlGrad {
  double dv{0.0};
  double domega{0.0};
};

// Forward-simulates the horizon. result[0] == x0, result.size() == N+1.
std::vector<Pose> rollout(const OcpSpec& spec, const Pose& x0,
                          const ControlSequence& w);

// Weighted squared deviation from the reference; the heading difference is
// wrapped so a full turn costs nothing.
double stage_cost(const Pose& x, const Control& u, const Reference& ref,
                  const Weights& weights);

// Sum of stage costs over k = 0..N-1 along the rollout. State k is paired
// with control k; the terminal state carries no stage cost.
double total_cost(const OcpSpec& spec, const Pose& x0,
                  const ControlSequence& w);

// One entry per (pose, obstacle) pair, pose-major:
//   g = keepout_radius - center_distance.
// g <= 0 means satisfied, g > 0 is the violation depth in meters.
std::vector<double> obstacle_violations(const OcpSpec& spec,
                                        const std::vector<Pose>& trajectory);

// total_cost + mu * sum(max(0, g)^2) over every pose of the rollout
// (including x0 and the terminal state) and every obstacle.
double penalized_objective(const OcpSpec& spec, const Pose& x0,
                           const ControlSequence& w, double mu);

// Exact gradient of penalized_objective with respect to every control entry:
// one forward rollout plus one backward adjoint sweep, O(N).
std::vector<ControlGrad> objective_gradient(const OcpSpec& spec,
                                            const Pose& x0,
                                            const ControlSequence& w,
                                            double mu);

namespace detail {
// Rollout into a caller-owned buffer; avoids per-call allocation in the
// brute-force grid loop.
void rollout_into(const OcpSpec& spec, const Pose& x0,
                  const ControlSequence& w, std::vector<Pose>& out);
double penalized_objective_on(const OcpSpec& spec,
                              const std::vector<Pose>& traj,
                              const ControlSequence& w, double mu);
}  // namespace detail

}  // namespace ddmpc
