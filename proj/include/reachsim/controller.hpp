#pragma once

#include "reachsim/dynamics.hpp"

namespace reachsim {

struct ObserverParams {
  bool enabled = true;
  double cutoff = 50.0; // rad/s, observer bandwidth
};

/// Gains of the reaching control law plus the target point.
struct ControllerParams {
  VecX C;          // per-joint damping weights, N*m*s/rad
  VecX f;          // per-joint muscle stiffness coefficients (dimensionless)
  VecX tau;        // per-joint filter time constants, s
  double k = 0.0;  // virtual spring stiffness, N/m
  Vec3 target = Vec3::Zero();
  ObserverParams observer;
  bool gravity_comp = true;  // feedforward G(q)
  bool friction_comp = true; // feedforward Fr(qdot)
};

/// Throws std::invalid_argument naming the violated constraint.
void validate_controller_params(const ControllerParams& params, int dof);

/// The tabulated gain set for the built-in 7-DOF arm.
ControllerParams table2_params();

/// Retuned profile for the built-in simulated arm (same structure, gains
/// adjusted for the simulated plant; see README).
ControllerParams tuned_params();

/// Persistent controller memory: motion-start distance, filter bank state,
/// and the momentum-observer integrator.
struct ControllerState {
  double dx0_norm = 0.0;       // ||dx_0||, captured once at motion start
  bool pure_damping = false;   // degenerate start: phase pinned at pi/2
  VecX filter_outputs;         // current W_f outputs
  VecX friction_comp;          // lagged friction feedforward
  VecX observer_integral;      // integral of (u + C^T qd - G - Fr + dhat)
  bool observer_primed = false;
  VecX disturbance_estimate;   // dhat

  bool initialized() const { return dx0_norm > 0.0 || pure_damping; }
};

/// Captures ||dx_0|| at the start configuration. If the end-effector already
/// sits within degenerate_tol of the target the state starts in pure-damping
/// mode and the phase never divides by ||dx_0||.
ControllerState make_controller_state(const ChainModel& chain, const ControllerParams& params,
                                      const VecX& q0, double degenerate_tol = 1e-9);

/// Normalized progress phase pi (dx0 - dx) / (2 dx0), clamped to [0, pi/2].
double progress_phase(double dx_norm, double dx0_norm);

/// Diagonal of K_V: C_i sin(phase). Zero at motion start, C at the target.
VecX damping_diag(const ControllerParams& params, double dx_norm, double dx0_norm);

/// Diagonal of F_mus: f_i cos(phase). f at motion start, zero at the target.
VecX muscle_diag(const ControllerParams& params, double dx_norm, double dx0_norm);

/// The bracket of the control law: -[K_V qdot + k F_mus J_lin^T dx], with
/// dx = x - target. Only the linear rows of J multiply the position error.
VecX raw_control(const ControllerParams& params, const ControllerState& state, const VecX& qdot,
                 const JacobianPair& J, const Vec3& x);

/// One exact-discretization step of the per-joint first-order filters:
/// y += (1 - exp(-dt/tau_i)) (u - y). Updates and returns the filter state.
/// tau_i = 0 is accepted as a passthrough (filter removed).
VecX lpf_step(ControllerState& state, const VecX& u_raw, double dt, const VecX& tau);

/// Time constant of the first-order lag on the friction feedforward (s).
/// Sampled tanh compensation flips sign at the control rate near standstill
/// and would pump energy into the light wrist joints; the lag averages the
/// flips to zero while passing sustained motion through unchanged.
inline constexpr double kFrictionCompTau = 0.02;

/// Generalized-momentum disturbance observer. u_applied must be the torque
/// actually commanded to the plant (including feedforward and the previous
/// -dhat). With friction_in_model the nominal model subtracts Fr(qdot);
/// keep it consistent with the plant's friction setting. Disabled keeps
/// dhat at zero.
VecX observer_step(const ChainModel& chain, ControllerState& state, const VecX& q, const VecX& qdot,
                   const VecX& u_applied, double dt, double cutoff, bool enabled,
                   bool friction_in_model = true);

struct ControlOutput {
  VecX u_raw;      // Eq-bracket before filtering
  VecX u_filtered; // low-pass image of u_raw
  VecX u_command;  // u_filtered + feedforward - dhat; plant input
  VecX Kv_diag;
  VecX Fmus_diag;
};

/// One controller tick: FK -> Jacobian -> raw control -> filter bank ->
/// feedforward and disturbance compensation -> observer update.
ControlOutput control_step(const ChainModel& chain, const ControllerParams& params,
                           ControllerState& state, const JointState& joint_state, double dt);

} // namespace reachsim
