#pragma once

#include "reachsim/sim_engine.hpp"

#include <vector>

namespace reachsim {

/// Config document is structurally broken or violates a constraint.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Paths (dotted, e.g. "controller.observer.cutoff") that were filled from
/// defaults rather than read from the document.
using DefaultedFields = std::vector<std::string>;

/// Parses the `controller { ... }` section. Missing fields default to the
/// tabulated 7-DOF gain set when dof == 7; for other arms C/f/tau are
/// required. Records defaulted paths when `defaulted` is non-null.
ControllerParams load_controller_config(const std::string& text, int dof,
                                        DefaultedFields* defaulted = nullptr);
ControllerParams load_controller_config_file(const std::string& path, int dof,
                                             DefaultedFields* defaulted = nullptr);

/// Parses the `simulation { ... }` section; every field is optional.
SimConfig load_sim_config(const std::string& text, int dof, DefaultedFields* defaulted = nullptr);
SimConfig load_sim_config_file(const std::string& path, int dof,
                               DefaultedFields* defaulted = nullptr);

/// JSON echoes of fully resolved configs, for the run manifest.
std::string controller_config_json(const ControllerParams& params);
std::string sim_config_json(const SimConfig& config);

} // namespace reachsim
