#pragma once

#include "reachsim/kinematics.hpp"

namespace reachsim {

/// Forward dynamics hit a configuration where the inertia matrix could not
/// be factorized as SPD.
class SingularConfigurationError : public std::runtime_error {
public:
  explicit SingularConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

/// Joint-space model terms at one state.
struct DynamicsTerms {
  MatX M;  // NxN inertia matrix
  MatX C;  // NxN Coriolis matrix, C*qdot reproduces the velocity torques
  VecX G;  // gravity torques
  VecX Fr; // friction torques at the state's qdot
};

/// Modified recursive Newton-Euler with an auxiliary velocity slot.
///
/// Returns joint torques u_i = e_i . tau_i for the supplied motion. The
/// auxiliary velocity enters every gyroscopic/centripetal product, which
/// makes the result linear in each of qdot_aux and qddot separately; probing
/// those slots with unit vectors yields the Coriolis and inertia matrices.
/// Gravity enters as a fictitious base acceleration -g when gravity_on.
VecX ne_alpha(const ChainModel& chain, const VecX& q, const VecX& qdot, const VecX& qdot_aux,
              const VecX& qddot, bool gravity_on);

/// Inertia matrix via unit-acceleration probes, gravity off. Output is
/// symmetrized after checking that the raw asymmetry is below 1e-9.
MatX mass_matrix(const ChainModel& chain, const VecX& q);

/// Coriolis matrix via auxiliary-velocity probes, gravity off.
/// C(q,qdot)*qdot equals ne_alpha(q, qdot, qdot, 0) exactly.
MatX coriolis_matrix(const ChainModel& chain, const VecX& q, const VecX& qdot);

/// Static gravity torques: u = G holds the arm still.
VecX gravity_vector(const ChainModel& chain, const VecX& q);

/// Smooth friction model, componentwise eta*qd + mu*tanh(beta*qd).
VecX friction_torque(const ChainModel& chain, const VecX& qdot);

/// All terms at once (M, C, G, and friction at the given qdot).
DynamicsTerms dynamics_terms(const ChainModel& chain, const VecX& q, const VecX& qdot);

/// Solves M(q) qddot = applied + external - C qdot - G - Fr for qddot via an
/// SPD factorization. Throws SingularConfigurationError (with a condition
/// estimate) if the factorization fails.
VecX forward_dynamics(const ChainModel& chain, const JointState& state, const VecX& applied_torque,
                      const VecX& external_disturbance, bool friction_on);

/// Total potential energy, zero level at the base origin.
double potential_energy(const ChainModel& chain, const VecX& q);

/// Kinetic energy (1/2) qdot^T M qdot.
double kinetic_energy(const ChainModel& chain, const VecX& q, const VecX& qdot);

} // namespace reachsim
