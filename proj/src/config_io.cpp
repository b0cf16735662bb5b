#include "reachsim/config_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace reachsim {

using nlohmann::json;

namespace {

json parse_doc(const std::string& text, const char* kind) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError(std::string(kind) + " config: top level must be an object");
    return doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string(kind) + " config: not valid JSON: " + e.what());
  }
}

std::string slurp(const std::string& path, const char* kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string(kind) + " config: cannot open file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double get_number(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("config field '" + path + "' must be a number");
  return v.get<double>();
}

bool get_bool(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError("config field '" + path + "' must be a boolean");
  return v.get<bool>();
}

VecX get_vector(const json& obj, const char* key, const std::string& path, int expect = -1) {
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError("config field '" + path + "' must be an array");
  if (expect >= 0 && static_cast<int>(v.size()) != expect) {
    throw ConfigError("config field '" + path + "' must have length " + std::to_string(expect));
  }
  VecX out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v.at(i).is_number()) throw ConfigError("config field '" + path + "' must hold numbers");
    out[static_cast<int>(i)] = v.at(i).get<double>();
  }
  return out;
}

void note_default(DefaultedFields* defaulted, const std::string& path) {
  if (defaulted) defaulted->push_back(path);
}

} // namespace

ControllerParams load_controller_config(const std::string& text, int dof,
                                        DefaultedFields* defaulted) {
  const json doc = parse_doc(text, "controller");
  if (!doc.contains("controller")) {
    throw ConfigError("controller config: missing 'controller' section");
  }
  const json& c = doc.at("controller");
  if (!c.is_object()) throw ConfigError("controller config: 'controller' must be an object");

  ControllerParams p;
  const bool have_table_defaults = (dof == 7);
  const ControllerParams table = table2_params();

  auto gains = [&](const char* key, const VecX& fallback) -> VecX {
    if (c.contains(key)) return get_vector(c, key, std::string("controller.") + key, dof);
    if (!have_table_defaults) {
      throw ConfigError(std::string("controller config: '") + key + "' is required for a " +
                        std::to_string(dof) + "-DOF arm");
    }
    note_default(defaulted, std::string("controller.") + key);
    return fallback;
  };
  p.C = gains("C", table.C);
  p.f = gains("f", table.f);
  p.tau = gains("tau", table.tau);

  if (c.contains("k")) {
    p.k = get_number(c, "k", "controller.k");
  } else {
    p.k = table.k;
    note_default(defaulted, "controller.k");
  }
  if (c.contains("target")) {
    p.target = Vec3(get_vector(c, "target", "controller.target", 3));
  } else {
    p.target = table.target;
    note_default(defaulted, "controller.target");
  }

  p.observer = ObserverParams{};
  if (c.contains("observer")) {
    const json& o = c.at("observer");
    if (!o.is_object()) throw ConfigError("config field 'controller.observer' must be an object");
    if (o.contains("enabled")) {
      p.observer.enabled = get_bool(o, "enabled", "controller.observer.enabled");
    } else {
      note_default(defaulted, "controller.observer.enabled");
    }
    if (o.contains("cutoff")) {
      p.observer.cutoff = get_number(o, "cutoff", "controller.observer.cutoff");
    } else {
      note_default(defaulted, "controller.observer.cutoff");
    }
  } else {
    note_default(defaulted, "controller.observer");
  }

  validate_controller_params(p, dof);
  return p;
}

ControllerParams load_controller_config_file(const std::string& path, int dof,
                                             DefaultedFields* defaulted) {
  return load_controller_config(slurp(path, "controller"), dof, defaulted);
}

SimConfig load_sim_config(const std::string& text, int dof, DefaultedFields* defaulted) {
  const json doc = parse_doc(text, "simulation");
  if (!doc.contains("simulation")) {
    throw ConfigError("simulation config: missing 'simulation' section");
  }
  const json& s = doc.at("simulation");
  if (!s.is_object()) throw ConfigError("simulation config: 'simulation' must be an object");

  SimConfig cfg;
  auto number = [&](const char* key, double& slot) {
    if (s.contains(key)) {
      slot = get_number(s, key, std::string("simulation.") + key);
    } else {
      note_default(defaulted, std::string("simulation.") + key);
    }
  };
  auto boolean = [&](const char* key, bool& slot) {
    if (s.contains(key)) {
      slot = get_bool(s, key, std::string("simulation.") + key);
    } else {
      note_default(defaulted, std::string("simulation.") + key);
    }
  };

  number("dt", cfg.dt);
  number("max_time", cfg.max_time);
  number("stop_position_tol", cfg.stop_position_tol);
  number("stop_speed_tol", cfg.stop_speed_tol);
  number("mass_perturbation", cfg.mass_perturbation);
  boolean("friction", cfg.friction_on);
  boolean("gravity_comp", cfg.gravity_comp_on);
  boolean("observer", cfg.observer_on);

  if (s.contains("initial_q")) {
    cfg.initial_q = get_vector(s, "initial_q", "simulation.initial_q", dof);
  } else {
    note_default(defaulted, "simulation.initial_q");
  }

  if (s.contains("disturbance")) {
    const json& arr = s.at("disturbance");
    if (!arr.is_array()) throw ConfigError("config field 'simulation.disturbance' must be an array");
    for (const json& d : arr) {
      if (!d.is_object()) throw ConfigError("simulation.disturbance entries must be objects");
      DisturbanceSpec spec;
      if (!d.contains("joint") || !d.at("joint").is_number_integer()) {
        throw ConfigError("simulation.disturbance entries need an integer 'joint' (1-based)");
      }
      spec.joint = d.at("joint").get<int>() - 1;
      spec.torque = d.contains("torque") ? get_number(d, "torque", "simulation.disturbance.torque") : 0.0;
      if (d.contains("t0")) spec.t0 = get_number(d, "t0", "simulation.disturbance.t0");
      if (d.contains("t1")) spec.t1 = get_number(d, "t1", "simulation.disturbance.t1");
      cfg.disturbances.push_back(spec);
    }
  } else {
    note_default(defaulted, "simulation.disturbance");
  }

  validate_sim_config(cfg, dof);
  return cfg;
}

SimConfig load_sim_config_file(const std::string& path, int dof, DefaultedFields* defaulted) {
  return load_sim_config(slurp(path, "simulation"), dof, defaulted);
}

std::string controller_config_json(const ControllerParams& params) {
  json c;
  c["C"] = std::vector<double>(params.C.data(), params.C.data() + params.C.size());
  c["f"] = std::vector<double>(params.f.data(), params.f.data() + params.f.size());
  c["tau"] = std::vector<double>(params.tau.data(), params.tau.data() + params.tau.size());
  c["k"] = params.k;
  c["target"] = {params.target[0], params.target[1], params.target[2]};
  c["observer"] = {{"enabled", params.observer.enabled}, {"cutoff", params.observer.cutoff}};
  return json{{"controller", c}}.dump(2);
}

std::string sim_config_json(const SimConfig& config) {
  json s;
  s["dt"] = config.dt;
  s["max_time"] = config.max_time;
  s["stop_position_tol"] = config.stop_position_tol;
  s["stop_speed_tol"] = config.stop_speed_tol;
  s["friction"] = config.friction_on;
  s["gravity_comp"] = config.gravity_comp_on;
  s["observer"] = config.observer_on;
  s["mass_perturbation"] = config.mass_perturbation;
  s["initial_q"] =
      std::vector<double>(config.initial_q.data(), config.initial_q.data() + config.initial_q.size());
  s["disturbance"] = json::array();
  for (const DisturbanceSpec& d : config.disturbances) {
    s["disturbance"].push_back(
        {{"joint", d.joint + 1}, {"torque", d.torque}, {"t0", d.t0}, {"t1", d.t1}});
  }
  return json{{"simulation", s}}.dump(2);
}

} // namespace reachsim
