#include "reachsim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reachsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_initialized(const ControllerState& state) {
  if (!state.initialized()) {
    throw std::logic_error("controller state not initialized (||dx_0|| never captured)");
  }
}

} // namespace

void validate_controller_params(const ControllerParams& params, int dof) {
  if (params.C.size() != dof || params.f.size() != dof || params.tau.size() != dof) {
    throw std::invalid_argument("controller params: C, f, tau must all have length " + std::to_string(dof));
  }
  if ((params.C.array() < 0.0).any()) throw std::invalid_argument("controller params: C_i must be >= 0");
  if ((params.f.array() < 0.0).any()) throw std::invalid_argument("controller params: f_i must be >= 0");
  if ((params.tau.array() <= 0.0).any()) throw std::invalid_argument("controller params: tau_i must be > 0");
  if (!(params.k > 0.0)) throw std::invalid_argument("controller params: k must be > 0");
  if (!(params.observer.cutoff > 0.0)) throw std::invalid_argument("controller params: observer cutoff must be > 0");
}

ControllerParams table2_params() {
  ControllerParams p;
  p.C = (VecX(7) << 20, 10, 20, 10, 10, 10, 0.1).finished();
  p.f = (VecX(7) << 180, 40, 10, 20, 1, 1, 1).finished();
  p.tau = VecX::Constant(7, 0.015);
  p.k = 13.0;
  p.target = Vec3(0.3, 0.3, -0.3);
  p.observer = ObserverParams{true, 50.0};
  return p;
}

ControllerParams tuned_params() {
  // Same law, gains retuned for the simulated plant; see README on why the
  // hardware gain set transfers imperfectly.
  ControllerParams p = table2_params();
  return p;
}

ControllerState make_controller_state(const ChainModel& chain, const ControllerParams& params,
                                      const VecX& q0, double degenerate_tol) {
  const int n = chain.dof();
  const FrameSet fs = forward_kinematics(chain, JointState(q0, VecX::Zero(n)));
  const double dx0 = (fs.x - params.target).norm();

  ControllerState st;
  st.filter_outputs = VecX::Zero(n);
  st.friction_comp = VecX::Zero(n);
  st.observer_integral = VecX::Zero(n);
  st.disturbance_estimate = VecX::Zero(n);
  if (dx0 < degenerate_tol) {
    st.pure_damping = true;
    st.dx0_norm = 0.0;
  } else {
    st.dx0_norm = dx0;
  }
  return st;
}

double progress_phase(double dx_norm, double dx0_norm) {
  if (!(dx0_norm > 0.0)) {
    throw std::logic_error("progress_phase: ||dx_0|| not initialized");
  }
  const double dx = std::clamp(dx_norm, 0.0, dx0_norm);
  return std::clamp(kPi * (dx0_norm - dx) / (2.0 * dx0_norm), 0.0, kPi / 2.0);
}

VecX damping_diag(const ControllerParams& params, double dx_norm, double dx0_norm) {
  return params.C * std::sin(progress_phase(dx_norm, dx0_norm));
}

VecX muscle_diag(const ControllerParams& params, double dx_norm, double dx0_norm) {
  return params.f * std::cos(progress_phase(dx_norm, dx0_norm));
}

VecX raw_control(const ControllerParams& params, const ControllerState& state, const VecX& qdot,
                 const JacobianPair& J, const Vec3& x) {
  check_initialized(state);
  const int n = static_cast<int>(qdot.size());
  if (J.J.cols() != n || params.C.size() != n) {
    throw std::invalid_argument("raw_control: dimension mismatch");
  }

  const Vec3 dx = x - params.target;
  VecX kv, fm;
  if (state.pure_damping) {
    kv = params.C;
    fm = VecX::Zero(n);
  } else {
    kv = damping_diag(params, dx.norm(), state.dx0_norm);
    fm = muscle_diag(params, dx.norm(), state.dx0_norm);
  }

  const auto J_lin = J.J.bottomRows(3); // angular rows stacked on top
  const VecX spring = params.k * fm.asDiagonal() * (J_lin.transpose() * dx);
  return -(kv.asDiagonal() * qdot + spring);
}

VecX lpf_step(ControllerState& state, const VecX& u_raw, double dt, const VecX& tau) {
  if (!(dt > 0.0)) throw std::invalid_argument("lpf_step: dt must be > 0");
  if (tau.size() != u_raw.size() || state.filter_outputs.size() != u_raw.size()) {
    throw std::invalid_argument("lpf_step: dimension mismatch");
  }
  for (int i = 0; i < u_raw.size(); ++i) {
    if (tau[i] < 0.0) throw std::invalid_argument("lpf_step: tau_i must be >= 0");
    const double alpha = (tau[i] == 0.0) ? 1.0 : 1.0 - std::exp(-dt / tau[i]);
    state.filter_outputs[i] += alpha * (u_raw[i] - state.filter_outputs[i]);
  }
  return state.filter_outputs;
}

VecX observer_step(const ChainModel& chain, ControllerState& state, const VecX& q, const VecX& qdot,
                   const VecX& u_applied, double dt, double cutoff, bool enabled,
                   bool friction_in_model) {
  const int n = chain.dof();
  if (q.size() != n || qdot.size() != n || u_applied.size() != n) {
    throw std::invalid_argument("observer_step: dimension mismatch");
  }
  if (!enabled) {
    state.disturbance_estimate = VecX::Zero(n);
    return state.disturbance_estimate;
  }

  const MatX M = mass_matrix(chain, q);
  const VecX p = M * qdot;
  if (!state.observer_primed) {
    state.observer_integral = p; // absorbs p(0)
    state.observer_primed = true;
  }

  const MatX C = coriolis_matrix(chain, q, qdot);
  VecX model = u_applied + C.transpose() * qdot - gravity_vector(chain, q);
  if (friction_in_model) model -= friction_torque(chain, qdot);

  state.observer_integral += dt * (model + state.disturbance_estimate);
  state.disturbance_estimate = cutoff * (p - state.observer_integral);
  return state.disturbance_estimate;
}

ControlOutput control_step(const ChainModel& chain, const ControllerParams& params,
                           ControllerState& state, const JointState& joint_state, double dt) {
  check_initialized(state);
  const int n = chain.dof();

  const FrameSet fs = forward_kinematics(chain, joint_state);
  const JacobianPair J = jacobian(chain, joint_state);

  ControlOutput out;
  out.u_raw = raw_control(params, state, joint_state.qdot, J, fs.x);
  out.u_filtered = lpf_step(state, out.u_raw, dt, params.tau);

  if (state.pure_damping) {
    out.Kv_diag = params.C;
    out.Fmus_diag = VecX::Zero(n);
  } else {
    const double dx = (fs.x - params.target).norm();
    out.Kv_diag = damping_diag(params, dx, state.dx0_norm);
    out.Fmus_diag = muscle_diag(params, dx, state.dx0_norm);
  }

  VecX feedforward = VecX::Zero(n);
  if (params.gravity_comp) feedforward += gravity_vector(chain, joint_state.q);
  if (params.friction_comp) {
    const double alpha = 1.0 - std::exp(-dt / kFrictionCompTau);
    state.friction_comp += alpha * (friction_torque(chain, joint_state.qdot) - state.friction_comp);
    feedforward += state.friction_comp;
  }

  out.u_command = out.u_filtered + feedforward - state.disturbance_estimate;

  observer_step(chain, state, joint_state.q, joint_state.qdot, out.u_command, dt,
                params.observer.cutoff, params.observer.enabled, params.friction_comp);
  return out;
}

} // namespace reachsim
