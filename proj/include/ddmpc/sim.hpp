#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ddmpc/controller.hpp"

namespace ddmpc {

struct NoiseModel {
  double control_noise_frac{0.0};  // multiplicative, e.g. 0.10 = 10%
  double localization_sigma{0.0};  // m, on x and y independently
  double heading_sigma{0.0};       // rad
  std::uint64_t seed{0};

  bool any_control() const { return control_noise_frac > 0.0; }
  bool any_pose() const {
    return localization_sigma > 0.0 || heading_sigma > 0.0;
  }

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

// Full experiment description.
struct Scenario {
  std::string name{"scenario"};
  Pose start{};
  WaypointPlan plan{};
  std::vector<Obstacle> obstacles{};
  double robot_radius{0.15};
  double safety_margin{0.05};
  double dt{0.5};
  int horizon{20};
  Weights weights{};
  ControlBounds bounds{};
  NoiseModel noise{};
  TerminationCriteria criteria{};
  std::optional<SolverConfig> solver{};  // defaults derive from dt when unset

  OcpSpec make_ocp_spec() const;
  SolverConfig solver_config() const {
    return solver ? *solver : SolverConfig::defaults_for(dt);
  }
  // Throws std::invalid_argument naming the violated field.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Outcome { success, timeout, collision };

std::string to_string(Outcome o);

struct LogRow {
  double t{0.0};  // simulated time, exactly k * dt
  bool control_applied{false};
  Control commanded{};
  Control applied{};
  Pose true_pose{};
  Pose measured{};
  double solve_time{0.0};
  std::string solver_status{};
};

struct TrajectoryLog {
  std::vector<LogRow> rows;
  Outcome outcome{Outcome::timeout};
};

// One seeded stream per noise source, so toggling control noise does not
// shift the localization draws and vice versa.
class NoiseStreams {
 public:
  explicit NoiseStreams(std::uint64_t seed);

  double control_normal();
  double pose_normal();

 private:
  std::mt19937_64 control_rng_;
  std::mt19937_64 pose_rng_;
  std::normal_distribution<double> control_unit_{0.0, 1.0};
  std::normal_distribution<double> pose_unit_{0.0, 1.0};
};

// Each component scaled by (1 + eps), eps ~ N(0, control_noise_frac), then
// re-clamped to the bounds.
Control apply_control_noise(const Control& u, const NoiseModel& noise,
                            const ControlBounds& bounds,
                            NoiseStreams& streams);

// Additive Gaussian position error plus independent heading error.
Pose apply_localization_noise(const Pose& true_pose, const NoiseModel& noise,
                              NoiseStreams& streams);

// Closed loop: measure (noisy), step the controller, perturb the command,
// advance the truth, detect collisions. Stops on success, timeout, or
// collision; the decision uses measured poses while the log keeps the truth.
TrajectoryLog run_scenario(const Scenario& scn,
                           const std::optional<SolverConfig>& config = {});

}  // namespace ddmpc
