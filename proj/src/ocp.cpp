#include "ddmpc/ocp.hpp"

#include <cassert>
#include <cmath>

namespace ddmpc {

namespace detail {

void rollout_into(const OcpSpec& spec, const Pose& x0,
                  const ControlSequence& w, std::vector<Pose>& out) {
  assert(static_cast<int>(w.size()) == spec.horizon);
  out.resize(w.size() + 1);
  out[0] = x0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    out[k + 1] = euler_step(out[k], w[k], spec.params);
  }
}

double penalized_objective_on(const OcpSpec& spec,
                              const std::vector<Pose>& traj,
                              const ControlSequence& w, double mu) {
  double cost = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    cost += stage_cost(traj[k], w[k], spec.reference, spec.weights);
  }
  if (mu > 0.0 && !spec.obstacles.empty()) {
    double penalty = 0.0;
    for (const Pose& p : traj) {
      for (const Obstacle& ob : spec.obstacles) {
        const double g =
            spec.keepout_radius(ob) - std::hypot(p.x - ob.x, p.y - ob.y);
        if (g > 0.0) penalty += g * g;
      }
    }
    cost += mu * penalty;
  }
  return cost;
}

}  // namespace detail

std::vector<Pose> rollout(const OcpSpec& spec, const Pose& x0,
                          const ControlSequence& w) {
  std::vector<Pose> traj;
  detail::rollout_into(spec, x0, w, traj);
  return traj;
}

double stage_cost(const Pose& x, const Control& u, const Reference& ref,
                  const Weights& weights) {
  const double ex = x.x - ref.x_ref.x;
  const double ey = x.y - ref.x_ref.y;
  const double eth = wrap_angle(x.theta - ref.x_ref.theta);
  const double ev = u.v - ref.u_ref.v;
  const double ew = u.omega - ref.u_ref.omega;
  return weights.q_x * ex * ex + weights.q_y * ey * ey +
         weights.q_theta * eth * eth + weights.r_v * ev * ev +
         weights.r_omega * ew * ew;
}

double total_cost(const OcpSpec& spec, const Pose& x0,
                  const ControlSequence& w) {
  const auto traj = rollout(spec, x0, w);
  double cost = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    cost += stage_cost(traj[k], w[k], spec.reference, spec.weights);
  }
  return cost;
}

std::vector<double> obstacle_violations(const OcpSpec& spec,
                                        const std::vector<Pose>& trajectory) {
  std::vector<double> out;
  out.reserve(trajectory.size() * spec.obstacles.size());
  for (const Pose& p : trajectory) {
    for (const Obstacle& ob : spec.obstacles) {
      out.push_back(spec.keepout_radius(ob) -
                    std::hypot(p.x - ob.x, p.y - ob.y));
    }
  }
  return out;
}

double penalized_objective(const OcpSpec& spec, const Pose& x0,
                           const ControlSequence& w, double mu) {
  std::vector<Pose> traj;
  detail::rollout_into(spec, x0, w, traj);
  return detail::penalized_objective_on(spec, traj, w, mu);
}

std::vector<ControlGrad> objective_gradient(const OcpSpec& spec,
                                            const Pose& x0,
                                            const ControlSequence& w,
                                            double mu) {
  const auto traj = rollout(spec, x0, w);
  const int n = spec.horizon;
  const double dt = spec.params.dt;
  const Weights& wt = spec.weights;
  const Reference& ref = spec.reference;

  // d(penalty)/d(position) at one pose. The squared hinge is C^1, so the
  // contribution vanishes continuously at the keep-out boundary.
  auto penalty_grad = [&](const Pose& p, double& gx, double& gy) {
    gx = 0.0;
    gy = 0.0;
    if (mu <= 0.0) return;
    for (const Obstacle& ob : spec.obstacles) {
      const double dx = p.x - ob.x;
      const double dy = p.y - ob.y;
      const double dist = std::hypot(dx, dy);
      const double g = spec.keepout_radius(ob) - dist;
      if (g > 0.0 && dist > 0.0) {
        const double c = -2.0 * mu * g / dist;
        gx += c * dx;
        gy += c * dy;
      }
    }
  };

  std::vector<ControlGrad> grad(static_cast<std::size_t>(n));

  // Adjoint seed at the terminal pose: only the penalty touches it.
  double lx, ly;
  penalty_grad(traj[static_cast<std::size_t>(n)], lx, ly);
  double lth = 0.0;

  for (int k = n - 1; k >= 0; --k) {
    const Pose& p = traj[static_cast<std::size_t>(k)];
    const Control& u = w[static_cast<std::size_t>(k)];
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);

    // dJ/du_k = stage-cost control term + B_k^T lambda_{k+1}
    grad[static_cast<std::size_t>(k)].dv =
        2.0 * wt.r_v * (u.v - ref.u_ref.v) + dt * (c * lx + s * ly);
    grad[static_cast<std::size_t>(k)].domega =
        2.0 * wt.r_omega * (u.omega - ref.u_ref.omega) + dt * lth;

    // lambda_k = dl/dx_k + d(penalty)/dx_k + A_k^T lambda_{k+1}
    double pgx, pgy;
    penalty_grad(p, pgx, pgy);
    const double nlx = 2.0 * wt.q_x * (p.x - ref.x_ref.x) + pgx + lx;
    const double nly = 2.0 * wt.q_y * (p.y - ref.x_ref.y) + pgy + ly;
    const double nlth =
        2.0 * wt.q_theta * wrap_angle(p.theta - ref.x_ref.theta) +
        dt * u.v * (-s * lx + c * ly) + lth;
    lx = nlx;
    ly = nly;
    lth = nlth;
  }
  return grad;
}

}  // namespace ddmpc
