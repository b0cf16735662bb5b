#pragma once

#include "reachsim/controller.hpp"

#include <functional>
#include <limits>
#include <string>

namespace reachsim {

/// Constant torque injected on one joint over a time window.
struct DisturbanceSpec {
  int joint = 0;   // 0-based
  double torque = 0.0; // N*m
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
};

struct SimConfig {
  double dt = 1e-3;      // 1 kHz control loop
  double max_time = 10.0;
  VecX initial_q;        // empty = all zeros (home of the builtin arm)
  double stop_position_tol = 0.02; // m
  double stop_speed_tol = 0.01;    // m/s
  bool friction_on = true;
  bool gravity_comp_on = true;
  bool observer_on = true;
  std::vector<DisturbanceSpec> disturbances;
  double mass_perturbation = 0.0; // plant-side fractional mass/inertia mismatch
};

void validate_sim_config(const SimConfig& config, int dof);

enum class Termination { converged, timeout, numerical_failure, unknown };

std::string to_string(Termination t);

/// One logged instant of the closed loop.
struct TraceRecord {
  double t = 0.0;
  VecX q, qdot;
  Vec3 x = Vec3::Zero();
  Vec3 xdot = Vec3::Zero();
  double dx_norm = 0.0;
  double speed = 0.0; // tangential end-effector speed, ||xdot||
  VecX u_raw, u_filtered, dhat, Kv_diag, Fmus_diag;
};

struct SimTrace {
  int dof = 0;
  std::vector<TraceRecord> records;
  Termination termination = Termination::unknown;
  double final_time = 0.0;
  std::string failure_message;
};

/// One RK4 step of the plant alone with the applied torque held zero-order.
/// The disturbance callback is sampled at the RK4 stage times.
JointState rk4_step(const ChainModel& chain, const JointState& state, const VecX& applied_torque,
                    const std::function<VecX(double)>& disturbance_at, double t, double dt,
                    bool friction_on);

/// Closed-loop fixed-step simulation: nominal model drives the controller
/// and observer, the (optionally mass-perturbed) plant integrates.
class Simulator {
public:
  Simulator(const ChainModel& chain, const ControllerParams& params, const SimConfig& config);

  /// One control tick + one RK4 plant step. Returns the record logged at the
  /// pre-step instant. Throws on numerical failure.
  TraceRecord step();

  const JointState& joint_state() const { return joint_state_; }
  const ControllerState& controller_state() const { return controller_state_; }
  double time() const { return time_; }

  /// Record of the current instant without advancing (no state mutation).
  TraceRecord snapshot() const;

  /// Converged when ||dx|| and the end-effector speed are both inside the
  /// stop tolerances.
  bool converged() const;

private:
  VecX disturbance_at(double t) const;

  ChainModel nominal_;
  ChainModel plant_;
  ControllerParams params_;
  SimConfig config_;
  ControllerState controller_state_;
  JointState joint_state_;
  double time_ = 0.0;
  ControlOutput last_output_;
};

/// Runs until convergence, timeout, or numerical failure and returns the
/// full trace (records at t = 0, dt, 2dt, ..., including the final state).
SimTrace run(const ChainModel& chain, const ControllerParams& params, const SimConfig& config);

/// Trace CSV: one header row, one row per record, fixed column order
/// (t, q, qdot, x, xdot, dx_norm, speed, u_raw, u_filtered, dhat, kv, fmus).
void write_trace_csv(const SimTrace& trace, const std::string& path);

/// Parses a trace CSV. Throws std::runtime_error naming the offending row
/// (1-based, counting the header) on malformed input.
SimTrace read_trace_csv(const std::string& path);

} // namespace reachsim
