#include "steprec/config.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace steprec {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_number(const std::string& field, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "not a number: '" + value + "'");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::optional<double> x0, xd0;
  PushEvent* push = nullptr;

  std::istringstream in(text);
  std::string line, section;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno),
                          "malformed section header: " + line);
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"lip",        "target", "bounds",
                                    "weights",    "simulation", "push",
                                    "grid",       "critical"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw ConfigError(section, "unknown section");
      if (section == "push") {
        cfg.scenario.pushes.emplace_back();
        push = &cfg.scenario.pushes.back();
      }
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno),
                        "expected 'key = value', got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string field = section.empty() ? key : section + "." + key;
    auto num = [&] { return parse_number(field, value); };

    Scenario& sc = cfg.scenario;
    if (section == "lip") {
      if (key == "z_c") sc.lip.z_c = num();
      else if (key == "g") sc.lip.g = num();
      else throw ConfigError(field, "unknown key");
    } else if (section == "target") {
      if (key == "step_duration") sc.target.T_sd = num();
      else if (key == "step_end_velocity") sc.target.xd_d = num();
      else throw ConfigError(field, "unknown key");
    } else if (section == "bounds") {
      if (key == "t_min") sc.bounds.T_min = num();
      else if (key == "t_max") sc.bounds.T_max = num();
      else if (key == "l_max") sc.bounds.L_max = num();
      else throw ConfigError(field, "unknown key");
    } else if (section == "weights") {
      if (key == "w1_pos") sc.weights.w1.pos = num();
      else if (key == "w1_vel") sc.weights.w1.vel = num();
      else if (key == "w2_pos") sc.weights.w2.pos = num();
      else if (key == "w2_vel") sc.weights.w2.vel = num();
      else if (key == "q_pos") sc.weights.q.pos = num();
      else if (key == "q_vel") sc.weights.q.vel = num();
      else throw ConfigError(field, "unknown key");
    } else if (section == "simulation") {
      if (key == "x0") x0 = num();
      else if (key == "xd0") xd0 = num();
      else if (key == "approach") {
        if (value == "holistic") sc.approach = Approach::Holistic;
        else if (value == "sequential") sc.approach = Approach::Sequential;
        else throw ConfigError(field, "expected holistic|sequential, got '" +
                                          value + "'");
      } else if (key == "dt_control") sc.dt_control = num();
      else if (key == "dt_int") sc.dt_int = num();
      else if (key == "t_end") sc.t_end = num();
      else if (key == "fall_x_limit") sc.fall_limits.x_limit = num();
      else if (key == "fall_v_limit") sc.fall_limits.v_limit = num();
      else throw ConfigError(field, "unknown key");
    } else if (section == "push") {
      if (key == "t_start") push->t_start = num();
      else if (key == "duration") push->duration = num();
      else if (key == "accel") push->accel = num();
      else throw ConfigError(field, "unknown key");
    } else if (section == "grid") {
      if (key == "x_lo") cfg.grid.x_lo = num();
      else if (key == "x_hi") cfg.grid.x_hi = num();
      else if (key == "x_step") cfg.grid.x_step = num();
      else if (key == "v_lo") cfg.grid.v_lo = num();
      else if (key == "v_hi") cfg.grid.v_hi = num();
      else if (key == "v_step") cfg.grid.v_step = num();
      else throw ConfigError(field, "unknown key");
    } else if (section == "critical") {
      if (key == "t_s0_jump") cfg.ridge.dT_s0 = num();
      else if (key == "t_s1_jump") cfg.ridge.dT_s1 = num();
      else if (key == "p_jump") cfg.ridge.dp = num();
      else if (key == "cost_diff_threshold") cfg.cost_diff_threshold = num();
      else throw ConfigError(field, "unknown key");
    } else {
      throw ConfigError(field, "key outside any section");
    }
  }

  Scenario& sc = cfg.scenario;
  if (!(sc.lip.z_c > 0.0)) throw ConfigError("lip.z_c", "must be positive");
  if (!(sc.lip.g > 0.0)) throw ConfigError("lip.g", "must be positive");
  sc.lip = make_params(sc.lip.z_c, sc.lip.g);

  // Default start state is the symmetric gait start [-x_d, xd_d].
  if (!(sc.target.T_sd > 0.0))
    throw ConfigError("target.step_duration", "must be positive");
  const ComState xd = desired_final_state(sc.target, sc.lip);
  sc.x0 = ComState{x0.value_or(-xd.x), xd0.value_or(xd.xd)};

  try {
    validate_scenario(sc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("scenario", e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace steprec
