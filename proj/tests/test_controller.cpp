#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ddmpc/controller.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace ddmpc;

namespace {

OcpSpec paper_spec() {
  OcpSpec spec;  // defaults already match the operating point
  spec.horizon = 20;
  spec.params.dt = 0.5;
  return spec;
}

}  // namespace

TEST_CASE("waypoint_reached needs both position and heading") {
  const TerminationCriteria c{};  // 0.4 m, 0.4 rad
  const Pose wp{1, 1, 0};
  CHECK(waypoint_reached(Pose{1, 1, 0}, wp, c));
  CHECK(waypoint_reached(Pose{1.2, 1, 0.3}, wp, c));
  CHECK(!waypoint_reached(Pose{1.5, 1, 0}, wp, c));    // 0.5 m off
  CHECK(!waypoint_reached(Pose{1, 1, 1.0}, wp, c));    // 1.0 rad off
  // Heading compares on the circle: 2*pi - 0.1 is only 0.1 away.
  CHECK(waypoint_reached(Pose{1, 1, 2 * std::numbers::pi - 0.1}, wp, c));
}

TEST_CASE("advance_waypoint moves one step and saturates") {
  const TerminationCriteria c{};
  WaypointPlan plan{{Pose{0, 0, 0}, Pose{1, 0, 0}, Pose{2, 0, 0}}};
  ControllerState st;

  // Far away: never advances.
  st = advance_waypoint(st, plan, Pose{5, 5, 0}, c);
  CHECK(st.waypoint_index == 0);

  // At the active waypoint: exactly one increment per call.
  st = advance_waypoint(st, plan, Pose{0, 0, 0}, c);
  CHECK(st.waypoint_index == 1);
  st = advance_waypoint(st, plan, Pose{1, 0, 0}, c);
  CHECK(st.waypoint_index == 2);

  // Reaching the final waypoint keeps the index on it.
  st = advance_waypoint(st, plan, Pose{2, 0, 0}, c);
  CHECK(st.waypoint_index == 2);
}

TEST_CASE("waypoint index is monotone and bounded") {
  test::Rng rng(401);
  const TerminationCriteria c{};
  for (int i = 0; i < 100; ++i) {
    WaypointPlan plan;
    const int count = rng.pick(1, 5);
    for (int k = 0; k < count; ++k) {
      plan.waypoints.push_back(test::random_pose(rng, 2.0));
    }
    ControllerState st;
    st.waypoint_index = static_cast<std::size_t>(rng.pick(0, count - 1));
    const auto before = st.waypoint_index;
    st = advance_waypoint(st, plan, test::random_pose(rng, 2.0), c);
    CHECK(st.waypoint_index >= before);
    CHECK(st.waypoint_index <= before + 1);
    CHECK(st.waypoint_index < plan.waypoints.size());
  }
}

TEST_CASE("run_state distinguishes success, timeout, running") {
  const TerminationCriteria c{};
  const WaypointPlan plan{{Pose{0, 0, 0}, Pose{2, 0, 0}}};
  ControllerState st;

  CHECK(run_state(st, plan, Pose{0, 0, 0}, c) == RunState::running);

  // Reached pose but not the final waypoint: still running.
  CHECK(run_state(st, plan, Pose{2, 0, 0}, c) == RunState::running);

  st.waypoint_index = 1;
  CHECK(run_state(st, plan, Pose{2, 0, 0}, c) == RunState::success);
  CHECK(run_state(st, plan, Pose{0, 0, 0}, c) == RunState::running);

  st.elapsed = c.max_time;
  CHECK(run_state(st, plan, Pose{0, 0, 0}, c) == RunState::timeout);
  // Success still wins at the buzzer.
  CHECK(run_state(st, plan, Pose{2, 0, 0}, c) == RunState::success);
}

TEST_CASE("controller rejects an empty plan") {
  CHECK_THROWS_AS(Controller(paper_spec(), WaypointPlan{},
                             TerminationCriteria{}, SolverConfig{}),
                  std::invalid_argument);
}

TEST_CASE("controller starts with a zero warm start of horizon length") {
  Controller ctl(paper_spec(), WaypointPlan{{Pose{1.5, 0, 0}}},
                 TerminationCriteria{}, SolverConfig::defaults_for(0.5));
  const ControllerState& st = ctl.internal_state();
  CHECK(st.waypoint_index == 0);
  CHECK(st.elapsed == 0.0);
  REQUIRE(st.last_solution.size() == 20);
  for (const Control& u : st.last_solution) CHECK(u == Control{0, 0});
}

TEST_CASE("at a non-final waypoint the commanded control is rest") {
  // Measured pose sits exactly on the active (first) waypoint; the zero
  // sequence is already optimal, so the solve returns it unchanged.
  Controller ctl(paper_spec(), WaypointPlan{{Pose{0, 0, 0}, Pose{2, 0, 0}}},
                 TerminationCriteria{}, SolverConfig::defaults_for(0.5));
  const auto [u, res] = ctl.step(Pose{0, 0, 0});
  CHECK(u == Control{0, 0});
  CHECK(res.status == SolveStatus::converged);
  CHECK(res.cost == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("first step toward a target straight ahead drives forward") {
  Controller ctl(paper_spec(), WaypointPlan{{Pose{1.5, 0, 0}}},
                 TerminationCriteria{}, SolverConfig::defaults_for(0.5));
  const auto [u, res] = ctl.step(Pose{0, 0, 0});
  CHECK(u.v > 0.0);
  CHECK(u.v <= 0.6);
  CHECK(u == res.w_opt.front());
  CHECK(ctl.internal_state().last_solution == res.w_opt);
}

TEST_CASE("the shifted warm start makes the second solve cheaper") {
  Controller ctl(paper_spec(), WaypointPlan{{Pose{1.5, 0, 0}}},
                 TerminationCriteria{}, SolverConfig::defaults_for(0.5));
  Pose truth{0, 0, 0};
  const auto [u0, first] = ctl.step(truth);
  truth = euler_step(truth, u0, ModelParams{0.5});
  ctl.tick(0.5);
  const auto [u1, second] = ctl.step(truth);
  CHECK(second.iterations <= first.iterations);
  (void)u1;
}

TEST_CASE("advance switches the active waypoint") {
  const WaypointPlan plan{{Pose{0.1, 0, 0}, Pose{2, 0, 0}}};
  Controller ctl(paper_spec(), plan, TerminationCriteria{},
                 SolverConfig::defaults_for(0.5));
  CHECK(ctl.active_waypoint() == plan.waypoints[0]);
  ctl.advance(Pose{0.1, 0, 0});
  CHECK(ctl.active_waypoint() == plan.waypoints[1]);
}

TEST_CASE("noise-free closed loop reaches the operating-point target") {
  Controller ctl(paper_spec(), WaypointPlan{{Pose{1.5, 0, 0}}},
                 TerminationCriteria{}, SolverConfig::defaults_for(0.5));
  Pose truth{0, 0, 0};
  int steps = 0;
  while (ctl.state_at(truth) == RunState::running) {
    REQUIRE(steps < 25);
    const auto [u, res] = ctl.step(truth);
    REQUIRE(res.w_opt.size() == 20);  // the horizon never shrinks
    CHECK(u.v >= -0.6);
    CHECK(u.v <= 0.6);
    CHECK(std::abs(u.omega) <= std::numbers::pi / 2 + 1e-12);
    truth = euler_step(truth, u, ModelParams{0.5});
    ctl.tick(0.5);
    ++steps;
  }
  CHECK(ctl.state_at(truth) == RunState::success);
  CHECK(std::hypot(truth.x - 1.5, truth.y) <= 0.4);
  CHECK(ctl.internal_state().elapsed <= 10.0);
}

TEST_CASE("stepping a terminated run throws") {
  const TerminationCriteria c{};

  SUBCASE("after success") {
    Controller ctl(paper_spec(), WaypointPlan{{Pose{0, 0, 0}}}, c,
                   SolverConfig::defaults_for(0.5));
    CHECK(ctl.state_at(Pose{0, 0, 0}) == RunState::success);
    CHECK_THROWS_AS(ctl.step(Pose{0, 0, 0}), std::logic_error);
  }
  SUBCASE("after timeout") {
    Controller ctl(paper_spec(), WaypointPlan{{Pose{5, 0, 0}}}, c,
                   SolverConfig::defaults_for(0.5));
    ctl.tick(c.max_time);
    CHECK(ctl.state_at(Pose{0, 0, 0}) == RunState::timeout);
    CHECK_THROWS_AS(ctl.step(Pose{0, 0, 0}), std::logic_error);
  }
}
