#include "ddmpc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ddmpc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_violation_of(const OcpSpec& spec, const Pose& x0,
                        const ControlSequence& w) {
  const auto traj = rollout(spec, x0, w);
  double worst = 0.0;
  for (double g : obstacle_violations(spec, traj)) worst = std::max(worst, g);
  return worst;
}

// Euclidean norm of the difference, over all control entries.
double diff_norm(const ControlSequence& a, const ControlSequence& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dv = a[i].v - b[i].v;
    const double dw = a[i].omega - b[i].omega;
    s += dv * dv + dw * dw;
  }
  return std::sqrt(s);
}

ControlSequence stepped(const ControlSequence& w,
                        const std::vector<ControlGrad>& g, double alpha,
                        const ControlBounds& bounds) {
  ControlSequence out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[i] = clamp_control(
        Control{w[i].v - alpha * g[i].dv, w[i].omega - alpha * g[i].domega},
        bounds);
  }
  return out;
}

struct DescentOutcome {
  bool stationary{false};
  bool out_of_budget{false};
};

// One full escalation schedule from one start. Shares the caller's clock so
// a fan of starts divides a single budget.
ControlSequence descend_schedule(const OcpSpec& spec, const Pose& x0,
                                 ControlSequence w, const SolverConfig& config,
                                 Clock::time_point t0, int& total_iters,
                                 DescentOutcome& out) {
  double mu = config.mu_init;
  double alpha = config.step_init;

  for (int outer = 0; outer < config.max_outer_iters; ++outer) {
    double obj = penalized_objective(spec, x0, w, mu);
    out.stationary = false;

    for (int inner = 0; inner < config.max_inner_iters; ++inner) {
      if (seconds_since(t0) > config.time_budget) {
        out.out_of_budget = true;
        return w;
      }
      const auto grad = objective_gradient(spec, x0, w, mu);

      // Stationarity probe: unit-step projected gradient.
      const ControlSequence probe = stepped(w, grad, 1.0, spec.bounds);
      if (diff_norm(w, probe) <= config.grad_tol) {
        out.stationary = true;
        break;
      }

      // Backtracking along the projection arc.
      double trial = alpha;
      bool accepted = false;
      while (trial >= 1e-12) {
        const ControlSequence w_try = stepped(w, grad, trial, spec.bounds);
        const double obj_try = penalized_objective(spec, x0, w_try, mu);
        const double move = diff_norm(w, w_try);
        if (obj_try <= obj - (config.armijo_c / trial) * move * move) {
          w = w_try;
          obj = obj_try;
          accepted = true;
          break;
        }
        trial *= 0.5;
      }
      if (!accepted) {
        // Step underflow: no descent direction at this scale.
        out.stationary = true;
        break;
      }
      alpha = std::min(trial * 2.0, 1e6);
      ++total_iters;
    }

    if (outer + 1 < config.max_outer_iters) mu *= config.mu_growth;
  }
  return w;
}

// Swing-out starts: commit to a bearing off the goal line, then steer back
// onto the goal proportionally. Each one traces a detour that already ends
// at the target, so descent only has to polish it, and one of them usually
// lands on the far side of an obstacle wall the plain warm start cannot
// cross. Menu order: -30, +30, -60, +60, -90, +90 degrees.
std::vector<ControlSequence> arc_starts(const OcpSpec& spec, const Pose& x0,
                                        int count) {
  std::vector<ControlSequence> fan;
  const int n = spec.horizon;
  const double dt = spec.params.dt;
  const ControlBounds& b = spec.bounds;
  const Pose& ref = spec.reference.x_ref;

  for (int i = 0; i < std::min(count, 6); ++i) {
    const double bearing = (std::numbers::pi / 6.0) * (1 + i / 2);
    const double sign = (i % 2 == 0) ? -1.0 : 1.0;
    const double rate_cap = sign > 0.0 ? b.omega_max : -b.omega_min;

    ControlSequence w(static_cast<std::size_t>(n), Control{0.0, 0.0});
    if (rate_cap > 0.0 && b.v_max > 0.0) {
      const int turn_steps =
          std::max(1, static_cast<int>(std::ceil(bearing / (rate_cap * dt))));
      const double swing =
          sign * bearing / (static_cast<double>(turn_steps) * dt);
      Pose p = x0;
      for (int k = 0; k < n; ++k) {
        Control u{b.v_max, swing};
        if (k >= turn_steps) {
          const double gap = std::hypot(ref.x - p.x, ref.y - p.y);
          const double aim =
              gap < 1e-9 ? ref.theta : std::atan2(ref.y - p.y, ref.x - p.x);
          u.v = std::min(b.v_max, gap / dt);
          u.omega = 2.0 * wrap_angle(aim - p.theta);
        }
        u = clamp_control(u, b);
        w[static_cast<std::size_t>(k)] = u;
        p = euler_step(p, u, spec.params);
      }
    }
    fan.push_back(std::move(w));
  }
  return fan;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::budget_exhausted:
      return "budget_exhausted";
    case SolveStatus::iteration_limit:
      return "iteration_limit";
  }
  return "unknown";
}

ControlSequence project_to_bounds(ControlSequence w, const ControlBounds& b) {
  for (Control& u : w) u = clamp_control(u, b);
  return w;
}

SolveResult solve(const OcpSpec& spec, const Pose& x0,
                  const ControlSequence& w_init, const SolverConfig& config) {
  if (static_cast<int>(w_init.size()) != spec.horizon) {
    throw std::invalid_argument(
        "solve: control sequence length " + std::to_string(w_init.size()) +
        " does not match horizon " + std::to_string(spec.horizon));
  }
  const auto t0 = Clock::now();

  SolveResult res;
  for (const Obstacle& ob : spec.obstacles) {
    const double g =
        spec.keepout_radius(ob) - std::hypot(x0.x - ob.x, x0.y - ob.y);
    if (g > spec.safety_margin) res.infeasible_start = true;
  }

  const ControlSequence w_start = project_to_bounds(w_init, spec.bounds);
  const double mu_final = config.final_mu();

  std::vector<ControlSequence> starts{w_start};
  for (ControlSequence& arc : arc_starts(spec, x0, config.arc_inits)) {
    starts.push_back(std::move(arc));
  }

  int total_iters = 0;
  bool out_of_budget = false;
  ControlSequence best;
  double best_obj = std::numeric_limits<double>::infinity();
  DescentOutcome best_outcome;

  for (const ControlSequence& start : starts) {
    DescentOutcome outcome;
    ControlSequence w =
        descend_schedule(spec, x0, start, config, t0, total_iters, outcome);
    out_of_budget |= outcome.out_of_budget;
    const double obj = penalized_objective(spec, x0, w, mu_final);
    if (obj < best_obj) {
      best_obj = obj;
      best = std::move(w);
      best_outcome = outcome;
    }
    if (out_of_budget) break;
  }

  // The contract promises no regression against the (projected) start.
  if (best_obj > penalized_objective(spec, x0, w_start, mu_final)) {
    best = w_start;
    best_obj = penalized_objective(spec, x0, best, mu_final);
  }

  res.w_opt = std::move(best);
  res.mu_final = mu_final;
  res.cost = best_obj;
  res.max_violation = max_violation_of(spec, x0, res.w_opt);
  res.iterations = total_iters;
  res.status = out_of_budget             ? SolveStatus::budget_exhausted
               : best_outcome.stationary ? SolveStatus::converged
                                         : SolveStatus::iteration_limit;
  res.solve_time = seconds_since(t0);
  return res;
}

SolveResult solve_bruteforce(const OcpSpec& spec, const Pose& x0, int levels,
                             double mu, bool parallel) {
  if (levels < 2) throw std::invalid_argument("solve_bruteforce: levels < 2");
  const int n = spec.horizon;

  constexpr double kGuard = 1e7;
  const double eval_count = std::pow(static_cast<double>(levels), 2.0 * n);
  if (eval_count > kGuard) {
    throw ProblemTooLarge("solve_bruteforce: " + std::to_string(levels) +
                          "^(2*" + std::to_string(n) +
                          ") evaluations exceed the 1e7 guard");
  }
  const std::int64_t total = static_cast<std::int64_t>(eval_count + 0.5);

  const ControlBounds& b = spec.bounds;
  auto axis = [levels](double lo, double hi, int i) {
    return lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(levels - 1);
  };

  // Decode a flat index into a control sequence, step-major, v before omega.
  auto decode = [&](std::int64_t idx, ControlSequence& w) {
    for (int k = 0; k < n; ++k) {
      const int iv = static_cast<int>(idx % levels);
      idx /= levels;
      const int iw = static_cast<int>(idx % levels);
      idx /= levels;
      w[static_cast<std::size_t>(k)] =
          Control{axis(b.v_min, b.v_max, iv), axis(b.omega_min, b.omega_max, iw)};
    }
  };

  double best_cost = std::numeric_limits<double>::infinity();
  std::int64_t best_idx = -1;

#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel
    {
      ControlSequence w(static_cast<std::size_t>(n));
      std::vector<Pose> traj;
      double local_cost = std::numeric_limits<double>::infinity();
      std::int64_t local_idx = -1;
#pragma omp for nowait
      for (std::int64_t idx = 0; idx < total; ++idx) {
        decode(idx, w);
        detail::rollout_into(spec, x0, w, traj);
        const double c = detail::penalized_objective_on(spec, traj, w, mu);
        if (c < local_cost || (c == local_cost && idx < local_idx)) {
          local_cost = c;
          local_idx = idx;
        }
      }
#pragma omp critical
      {
        if (local_cost < best_cost ||
            (local_cost == best_cost && local_idx < best_idx)) {
          best_cost = local_cost;
          best_idx = local_idx;
        }
      }
    }
  } else
#else
  (void)parallel;
#endif
  {
    ControlSequence w(static_cast<std::size_t>(n));
    std::vector<Pose> traj;
    for (std::int64_t idx = 0; idx < total; ++idx) {
      decode(idx, w);
      detail::rollout_into(spec, x0, w, traj);
      const double c = detail::penalized_objective_on(spec, traj, w, mu);
      if (c < best_cost) {
        best_cost = c;
        best_idx = idx;
      }
    }
  }

  SolveResult res;
  res.w_opt.resize(static_cast<std::size_t>(n));
  decode(best_idx, res.w_opt);
  res.cost = best_cost;
  res.max_violation = max_violation_of(spec, x0, res.w_opt);
  res.iterations = static_cast<int>(total);
  res.mu_final = mu;
  res.status = SolveStatus::converged;
  return res;
}

}  // namespace ddmpc
