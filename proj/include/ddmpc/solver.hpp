#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "ddmpc/ocp.hpp"

namespace ddmpc {

// Thrown by solve_bruteforce when the grid would exceed the evaluation guard.
struct ProblemTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  int max_outer_iters{4};     // penalty escalations
  int max_inner_iters{500};   // descent steps per escalation
  double mu_init{10.0};       // initial penalty weight
  double mu_growth{10.0};     // multiplicative factor per escalation
  double grad_tol{1e-4};      // projected-gradient stationarity tolerance
  double step_init{1.0};      // initial line-search step
  double armijo_c{1e-4};      // sufficient-decrease constant
  double time_budget{0.4};    // hard wall-clock cap, s
  int arc_inits{0};           // extra constant-turn starts, 0..6 (0 = off)

  // Budget follows the real-time rule: each solve must finish inside the
  // sampling interval, with headroom.
  static SolverConfig defaults_for(double dt) {
    SolverConfig c;
    c.time_budget = 0.8 * dt;
    return c;
  }

  // Penalty weight in effect on the last escalation.
  double final_mu() const {
    return mu_init * std::pow(mu_growth, max_outer_iters - 1);
  }

  bool valid() const {
    return max_outer_iters >= 1 && max_inner_iters >= 1 && mu_init > 0.0 &&
           mu_growth > 1.0 && grad_tol > 0.0 && step_init > 0.0 &&
           armijo_c > 0.0 && armijo_c < 1.0 && time_budget > 0.0 &&
           arc_inits >= 0 && arc_inits <= 6;
  }

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

enum class SolveStatus { converged, budget_exhausted, iteration_limit };

std::string to_string(SolveStatus s);

struct SolveResult {
  ControlSequence w_opt;
  double cost{0.0};           // penalized objective at w_opt and mu_final
  double max_violation{0.0};  // worst keep-out intrusion along the rollout, m
  int iterations{0};          // accepted descent steps, all escalations
  double solve_time{0.0};     // wall clock, s
  SolveStatus status{SolveStatus::converged};
  double mu_final{0.0};
  // x0 itself was inside the hard keep-out radius. Reported, not fatal:
  // escape is often feasible.
  bool infeasible_start{false};
};

// clamp_control applied elementwise. Idempotent.
ControlSequence project_to_bounds(ControlSequence w, const ControlBounds& b);

// Minimizes the penalized objective over the control sequence: projected
// gradient descent with Armijo backtracking inside an escalating exterior
// penalty loop. Deterministic; returns within config.time_budget plus at
// most one iteration of slack.
//
// With arc_inits > 0 the same descent also runs from up to six constant-turn
// starts (swing to +-30/60/90 degrees, then straight toward the target) and
// the lowest final-penalty objective wins. Gradient descent alone cannot
// cross a wall of overlapping keep-out discs; a start seeded on the far side
// can. The fan is a fixed menu, so results stay deterministic, and all
// starts share one time budget.
SolveResult solve(const OcpSpec& spec, const Pose& x0,
                  const ControlSequence& w_init, const SolverConfig& config);

// Verification oracle: exhaustively evaluates the penalized objective on a
// per-axis grid of `levels` values and returns the grid argmin. Exponential
// in the horizon; guarded at 1e7 evaluations. `parallel` selects the OpenMP
// path; both paths return bit-identical results.
SolveResult solve_bruteforce(const OcpSpec& spec, const Pose& x0, int levels,
                             double mu, bool parallel = true);

}  // namespace ddmpc
