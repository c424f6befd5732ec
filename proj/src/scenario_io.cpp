#include "ddmpc/scenario_io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "json.hpp"

namespace ddmpc {

namespace {

using ordered_json = nlohmann::ordered_json;

// Walks the document with a breadcrumb path so every complaint names the
// offending key ("noise.control_noise_frac: expected a number").
struct Cur {
  const ordered_json* j;
  const std::string* origin;
  std::string path;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error(*origin + ": " +
                             (path.empty() ? "<root>" : path) + ": " + msg);
  }

  Cur at(const std::string& key) const {
    if (!j->is_object()) fail("expected an object");
    auto it = j->find(key);
    if (it == j->end()) fail("missing required key '" + key + "'");
    return Cur{&*it, origin, path.empty() ? key : path + "." + key};
  }

  std::optional<Cur> maybe(const std::string& key) const {
    if (!j->is_object()) fail("expected an object");
    auto it = j->find(key);
    if (it == j->end()) return std::nullopt;
    return Cur{&*it, origin, path.empty() ? key : path + "." + key};
  }

  double num() const {
    if (!j->is_number()) fail("expected a number");
    return j->get<double>();
  }

  int integer() const {
    if (!j->is_number_integer()) fail("expected an integer");
    return static_cast<int>(j->get<std::int64_t>());
  }

  std::uint64_t uint64() const {
    if (!j->is_number_unsigned() &&
        !(j->is_number_integer() && j->get<std::int64_t>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return j->get<std::uint64_t>();
  }

  std::string str() const {
    if (!j->is_string()) fail("expected a string");
    return j->get<std::string>();
  }

  std::vector<Cur> array() const {
    if (!j->is_array()) fail("expected an array");
    std::vector<Cur> out;
    out.reserve(j->size());
    for (std::size_t i = 0; i < j->size(); ++i) {
      out.push_back(Cur{&(*j)[i], origin, path + "[" + std::to_string(i) + "]"});
    }
    return out;
  }

  // Rejects unknown keys so a typo ("dt" for "dt_s") fails loudly instead of
  // silently keeping the default.
  void only_keys(std::initializer_list<std::string_view> allowed) const {
    if (!j->is_object()) fail("expected an object");
    for (auto it = j->begin(); it != j->end(); ++it) {
      bool known = false;
      for (std::string_view k : allowed) {
        if (it.key() == k) {
          known = true;
          break;
        }
      }
      if (!known) fail("unknown key '" + it.key() + "'");
    }
  }
};

double num_or(const Cur& c, const std::string& key, double dflt) {
  auto m = c.maybe(key);
  return m ? m->num() : dflt;
}

Pose parse_pose(const Cur& c) {
  c.only_keys({"x_m", "y_m", "theta_rad"});
  return Pose{c.at("x_m").num(), c.at("y_m").num(), c.at("theta_rad").num()};
}

Obstacle parse_obstacle(const Cur& c) {
  c.only_keys({"x_m", "y_m", "radius_m"});
  return Obstacle{c.at("x_m").num(), c.at("y_m").num(),
                  c.at("radius_m").num()};
}

Weights parse_weights(const Cur& c) {
  c.only_keys({"q_x", "q_y", "q_theta", "r_v", "r_omega"});
  Weights w;
  w.q_x = num_or(c, "q_x", w.q_x);
  w.q_y = num_or(c, "q_y", w.q_y);
  w.q_theta = num_or(c, "q_theta", w.q_theta);
  w.r_v = num_or(c, "r_v", w.r_v);
  w.r_omega = num_or(c, "r_omega", w.r_omega);
  return w;
}

ControlBounds parse_bounds(const Cur& c) {
  c.only_keys({"v_min_mps", "v_max_mps", "omega_min_radps", "omega_max_radps"});
  ControlBounds b;
  b.v_min = num_or(c, "v_min_mps", b.v_min);
  b.v_max = num_or(c, "v_max_mps", b.v_max);
  b.omega_min = num_or(c, "omega_min_radps", b.omega_min);
  b.omega_max = num_or(c, "omega_max_radps", b.omega_max);
  return b;
}

NoiseModel parse_noise(const Cur& c) {
  c.only_keys(
      {"control_noise_frac", "localization_sigma_m", "heading_sigma_rad",
       "seed"});
  NoiseModel n;
  n.control_noise_frac = num_or(c, "control_noise_frac", 0.0);
  n.localization_sigma = num_or(c, "localization_sigma_m", 0.0);
  // Unless stated, heading error scales with position error (0.04 rad per
  // 0.02 m).
  n.heading_sigma = num_or(c, "heading_sigma_rad", 2.0 * n.localization_sigma);
  if (auto s = c.maybe("seed")) n.seed = s->uint64();
  return n;
}

TerminationCriteria parse_criteria(const Cur& c) {
  c.only_keys({"pos_tol_m", "rot_tol_rad", "max_time_s"});
  TerminationCriteria t;
  t.pos_tol = num_or(c, "pos_tol_m", t.pos_tol);
  t.rot_tol = num_or(c, "rot_tol_rad", t.rot_tol);
  t.max_time = num_or(c, "max_time_s", t.max_time);
  return t;
}

SolverConfig parse_solver(const Cur& c, double dt) {
  c.only_keys({"max_outer_iters", "max_inner_iters", "mu_init", "mu_growth",
               "grad_tol", "step_init", "armijo_c", "time_budget_s",
               "arc_inits"});
  SolverConfig cfg = SolverConfig::defaults_for(dt);
  if (auto v = c.maybe("max_outer_iters")) cfg.max_outer_iters = v->integer();
  if (auto v = c.maybe("max_inner_iters")) cfg.max_inner_iters = v->integer();
  cfg.mu_init = num_or(c, "mu_init", cfg.mu_init);
  cfg.mu_growth = num_or(c, "mu_growth", cfg.mu_growth);
  cfg.grad_tol = num_or(c, "grad_tol", cfg.grad_tol);
  cfg.step_init = num_or(c, "step_init", cfg.step_init);
  cfg.armijo_c = num_or(c, "armijo_c", cfg.armijo_c);
  cfg.time_budget = num_or(c, "time_budget_s", cfg.time_budget);
  if (auto v = c.maybe("arc_inits")) cfg.arc_inits = v->integer();
  return cfg;
}

Scenario parse_scenario(const Cur& root) {
  root.only_keys({"name", "start", "waypoints", "obstacles", "robot_radius_m",
                  "safety_margin_m", "dt_s", "horizon_steps", "weights",
                  "bounds", "noise", "termination", "solver"});
  Scenario scn;
  if (auto n = root.maybe("name")) scn.name = n->str();
  scn.start = parse_pose(root.at("start"));
  scn.plan.waypoints.clear();
  for (const Cur& w : root.at("waypoints").array()) {
    scn.plan.waypoints.push_back(parse_pose(w));
  }
  if (auto obs = root.maybe("obstacles")) {
    for (const Cur& o : obs->array()) {
      scn.obstacles.push_back(parse_obstacle(o));
    }
  }
  scn.robot_radius = num_or(root, "robot_radius_m", scn.robot_radius);
  scn.safety_margin = num_or(root, "safety_margin_m", scn.safety_margin);
  scn.dt = root.at("dt_s").num();
  scn.horizon = root.at("horizon_steps").integer();
  if (auto w = root.maybe("weights")) scn.weights = parse_weights(*w);
  if (auto b = root.maybe("bounds")) scn.bounds = parse_bounds(*b);
  if (auto n = root.maybe("noise")) scn.noise = parse_noise(*n);
  if (auto t = root.maybe("termination")) scn.criteria = parse_criteria(*t);
  if (auto s = root.maybe("solver")) scn.solver = parse_solver(*s, scn.dt);
  return scn;
}

ordered_json parse_document(const std::string& text,
                            const std::string& origin) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    // nlohmann's message already carries line/column
    throw std::runtime_error(origin + ": " + e.what());
  }
}

ordered_json pose_json(const Pose& p) {
  return ordered_json{{"x_m", p.x}, {"y_m", p.y}, {"theta_rad", p.theta}};
}

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + file.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

// Minimal CSV assembler. No quoting: every value written here is a number,
// an identifier-like token, or empty.
struct Csv {
  std::string text;
  bool line_open{false};

  Csv& col(std::string_view s) {
    if (line_open) text += ',';
    text += s;
    line_open = true;
    return *this;
  }
  Csv& col(double v) { return col(format_double(v)); }
  Csv& col(int v) { return col(std::to_string(v)); }
  Csv& col(std::uint64_t v) { return col(std::to_string(v)); }
  Csv& flag(bool b) { return col(b ? "true" : "false"); }
  Csv& end() {
    text += '\n';
    line_open = false;
    return *this;
  }
};

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

Scenario scenario_from_json_text(const std::string& text,
                                 const std::string& origin) {
  ordered_json j = parse_document(text, origin);
  Scenario scn = parse_scenario(Cur{&j, &origin, ""});
  try {
    scn.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  return scn;
}

std::string scenario_to_json_text(const Scenario& scn) {
  ordered_json j;
  j["name"] = scn.name;
  j["start"] = pose_json(scn.start);
  ordered_json wps = ordered_json::array();
  for (const Pose& w : scn.plan.waypoints) wps.push_back(pose_json(w));
  j["waypoints"] = std::move(wps);
  if (!scn.obstacles.empty()) {
    ordered_json obs = ordered_json::array();
    for (const Obstacle& o : scn.obstacles) {
      obs.push_back(ordered_json{
          {"x_m", o.x}, {"y_m", o.y}, {"radius_m", o.radius}});
    }
    j["obstacles"] = std::move(obs);
  }
  j["robot_radius_m"] = scn.robot_radius;
  j["safety_margin_m"] = scn.safety_margin;
  j["dt_s"] = scn.dt;
  j["horizon_steps"] = scn.horizon;
  j["weights"] = ordered_json{{"q_x", scn.weights.q_x},
                              {"q_y", scn.weights.q_y},
                              {"q_theta", scn.weights.q_theta},
                              {"r_v", scn.weights.r_v},
                              {"r_omega", scn.weights.r_omega}};
  j["bounds"] = ordered_json{{"v_min_mps", scn.bounds.v_min},
                             {"v_max_mps", scn.bounds.v_max},
                             {"omega_min_radps", scn.bounds.omega_min},
                             {"omega_max_radps", scn.bounds.omega_max}};
  j["noise"] = ordered_json{
      {"control_noise_frac", scn.noise.control_noise_frac},
      {"localization_sigma_m", scn.noise.localization_sigma},
      {"heading_sigma_rad", scn.noise.heading_sigma},
      {"seed", scn.noise.seed}};
  j["termination"] = ordered_json{{"pos_tol_m", scn.criteria.pos_tol},
                                  {"rot_tol_rad", scn.criteria.rot_tol},
                                  {"max_time_s", scn.criteria.max_time}};
  if (scn.solver) {
    const SolverConfig& c = *scn.solver;
    j["solver"] = ordered_json{{"max_outer_iters", c.max_outer_iters},
                               {"max_inner_iters", c.max_inner_iters},
                               {"mu_init", c.mu_init},
                               {"mu_growth", c.mu_growth},
                               {"grad_tol", c.grad_tol},
                               {"step_init", c.step_init},
                               {"armijo_c", c.armijo_c},
                               {"time_budget_s", c.time_budget},
                               {"arc_inits", c.arc_inits}};
  }
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& file) {
  return scenario_from_json_text(read_text_file(file), file.string());
}

void save_scenario(const Scenario& scn, const std::filesystem::path& file) {
  write_text_file(file, scenario_to_json_text(scn));
}

SweepSpec sweep_from_json_text(const std::string& text,
                               const std::string& origin) {
  ordered_json j = parse_document(text, origin);
  Cur root{&j, &origin, ""};
  root.only_keys({"base", "dt_values_s", "horizon_values", "trials_per_cell",
                  "seeds", "targets"});
  SweepSpec sp;
  sp.base = parse_scenario(root.at("base"));
  for (const Cur& v : root.at("dt_values_s").array()) {
    sp.dt_values.push_back(v.num());
  }
  for (const Cur& v : root.at("horizon_values").array()) {
    sp.horizon_values.push_back(v.integer());
  }
  if (auto t = root.maybe("trials_per_cell")) {
    sp.trials_per_cell = t->integer();
  }
  if (auto s = root.maybe("seeds")) {
    for (const Cur& v : s->array()) sp.seeds.push_back(v.uint64());
  }
  if (auto t = root.maybe("targets")) {
    for (const Cur& v : t->array()) sp.targets.push_back(parse_pose(v));
  }
  try {
    sp.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  return sp;
}

SweepSpec load_sweep(const std::filesystem::path& file) {
  return sweep_from_json_text(read_text_file(file), file.string());
}

std::string log_csv(const TrajectoryLog& log) {
  Csv csv;
  csv.col("t_s")
      .col("commanded_v_mps")
      .col("commanded_omega_radps")
      .col("applied_v_mps")
      .col("applied_omega_radps")
      .col("true_x_m")
      .col("true_y_m")
      .col("true_theta_rad")
      .col("measured_x_m")
      .col("measured_y_m")
      .col("measured_theta_rad")
      .col("solve_time_s")
      .col("status")
      .end();
  for (const LogRow& r : log.rows) {
    csv.col(r.t);
    if (r.control_applied) {
      csv.col(r.commanded.v)
          .col(r.commanded.omega)
          .col(r.applied.v)
          .col(r.applied.omega);
    } else {
      csv.col("").col("").col("").col("");
    }
    csv.col(r.true_pose.x)
        .col(r.true_pose.y)
        .col(r.true_pose.theta)
        .col(r.measured.x)
        .col(r.measured.y)
        .col(r.measured.theta);
    if (r.control_applied) {
      csv.col(r.solve_time);
    } else {
      csv.col("");
    }
    csv.col(r.solver_status).end();
  }
  return csv.text;
}

std::string metrics_csv(const RunMetrics& m) {
  Csv csv;
  csv.col("euclidean_position_error_m")
      .col("rotation_error_rad")
      .col("max_trajectory_error_m")
      .col("avg_trajectory_error_m")
      .col("min_obstacle_distance_m")
      .col("total_time_s")
      .col("max_solve_time_s")
      .col("outcome")
      .end();
  csv.col(m.euclidean_position_error)
      .col(m.rotation_error)
      .col(m.max_trajectory_error)
      .col(m.avg_trajectory_error);
  if (m.min_obstacle_distance) {
    csv.col(*m.min_obstacle_distance);
  } else {
    csv.col("");
  }
  csv.col(m.total_time).col(m.max_solve_time).col(to_string(m.outcome)).end();
  return csv.text;
}

std::string sweep_csv(const std::vector<TableRow>& rows) {
  Csv csv;
  csv.col("dt_s")
      .col("horizon_steps")
      .col("total_time_s")
      .col("max_solve_time_s")
      .col("euclidean_error_m")
      .col("rotation_error_rad")
      .col("outcome")
      .col("target")
      .col("trial")
      .col("seed")
      .col("pass_total_time")
      .col("pass_solve_time")
      .col("pass_position")
      .col("pass_rotation")
      .end();
  for (const TableRow& r : rows) {
    csv.col(r.dt)
        .col(r.horizon)
        .col(r.total_time)
        .col(r.max_solve_time)
        .col(r.euclidean_error)
        .col(r.rotation_error)
        .col(to_string(r.outcome))
        .col(r.target_index)
        .col(r.trial)
        .col(r.seed)
        .flag(r.pass_total_time)
        .flag(r.pass_solve_time)
        .flag(r.pass_position)
        .flag(r.pass_rotation)
        .end();
  }
  return csv.text;
}

std::string sweep_aggregate_csv(const std::vector<AggregateRow>& rows) {
  Csv csv;
  csv.col("dt_s")
      .col("horizon_steps")
      .col("runs")
      .col("successes")
      .col("mean_total_time_s")
      .col("worst_total_time_s")
      .col("mean_max_solve_time_s")
      .col("worst_max_solve_time_s")
      .col("mean_euclidean_error_m")
      .col("worst_euclidean_error_m")
      .col("mean_rotation_error_rad")
      .col("worst_rotation_error_rad")
      .col("pass_all")
      .end();
  for (const AggregateRow& r : rows) {
    csv.col(r.dt)
        .col(r.horizon)
        .col(r.runs)
        .col(r.successes)
        .col(r.mean_total_time)
        .col(r.worst_total_time)
        .col(r.mean_max_solve_time)
        .col(r.worst_max_solve_time)
        .col(r.mean_euclidean_error)
        .col(r.worst_euclidean_error)
        .col(r.mean_rotation_error)
        .col(r.worst_rotation_error)
        .flag(r.pass_all)
        .end();
  }
  return csv.text;
}

std::string waypoint_metrics_csv(const std::vector<RunMetrics>& trials,
                                 bool with_obstacles) {
  Csv csv;
  csv.col("trial")
      .col("euclidean_position_error_m")
      .col("rotation_error_rad")
      .col("max_trajectory_error_m")
      .col("avg_trajectory_error_m");
  if (with_obstacles) csv.col("min_obstacle_distance_m");
  csv.col("total_time_s").col("outcome").end();

  RunMetrics sum;
  double min_sum = 0.0;
  int min_count = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const RunMetrics& m = trials[i];
    csv.col(static_cast<int>(i + 1))
        .col(m.euclidean_position_error)
        .col(m.rotation_error)
        .col(m.max_trajectory_error)
        .col(m.avg_trajectory_error);
    if (with_obstacles) {
      if (m.min_obstacle_distance) {
        csv.col(*m.min_obstacle_distance);
        min_sum += *m.min_obstacle_distance;
        ++min_count;
      } else {
        csv.col("");
      }
    }
    csv.col(m.total_time).col(to_string(m.outcome)).end();
    sum.euclidean_position_error += m.euclidean_position_error;
    sum.rotation_error += m.rotation_error;
    sum.max_trajectory_error += m.max_trajectory_error;
    sum.avg_trajectory_error += m.avg_trajectory_error;
    sum.total_time += m.total_time;
  }
  if (!trials.empty()) {
    const double n = static_cast<double>(trials.size());
    csv.col("average")
        .col(sum.euclidean_position_error / n)
        .col(sum.rotation_error / n)
        .col(sum.max_trajectory_error / n)
        .col(sum.avg_trajectory_error / n);
    if (with_obstacles) {
      if (min_count > 0) {
        csv.col(min_sum / min_count);
      } else {
        csv.col("");
      }
    }
    csv.col(sum.total_time / n).col("").end();
  }
  return csv.text;
}

void write_text_file(const std::filesystem::path& file,
                     const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + file.string());
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("short write to " + file.string());
  }
}

}  // namespace ddmpc
