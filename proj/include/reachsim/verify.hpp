#pragma once

#include "reachsim/dynamics.hpp"
#include "reachsim/sim_engine.hpp"

namespace reachsim::verify {

/// Closed-form planar two-link arm used as an independent oracle for the
/// recursive dynamics. Links rotate about +Z in the X-Y plane; angles are
/// measured from +X; gravity pulls along -Y.
struct TwoLink {
  double m1 = 1.0, m2 = 1.0; // link masses
  double l1 = 1.0, l2 = 1.0; // link lengths
  double c1 = 0.5, c2 = 0.5; // COM distances from the proximal joints
  double I1 = 0.05, I2 = 0.05; // moments about the COM, about Z
  double g = 9.81;
};

/// Equivalent ChainModel (gravity (0,-g,0), or zero-g when with_gravity is
/// false). In-plane principal moments are I/2 each; they do not affect
/// planar motion.
ChainModel two_link_chain(const TwoLink& p, bool with_gravity);

MatX two_link_mass(const TwoLink& p, const VecX& q);
MatX two_link_coriolis(const TwoLink& p, const VecX& q, const VecX& qdot); // Christoffel form
VecX two_link_gravity(const TwoLink& p, const VecX& q);
VecX two_link_inverse_dynamics(const TwoLink& p, const VecX& q, const VecX& qdot, const VecX& qddot);

/// Central-difference d/dt of the Jacobian along qdot.
MatX numeric_jacobian_dot(const ChainModel& chain, const VecX& q, const VecX& qdot, double h = 1e-6);

/// Central-difference d/dt of the end-effector position along qdot.
Vec3 numeric_ee_velocity(const ChainModel& chain, const VecX& q, const VecX& qdot, double h = 1e-6);

/// Central-difference second time derivative of the end-effector position
/// along (qdot, qddot).
Vec3 numeric_ee_acceleration(const ChainModel& chain, const VecX& q, const VecX& qdot,
                             const VecX& qddot, double h = 1e-5);

/// End-effector angular velocity recovered from Rdot * R^T of the last link.
Vec3 numeric_ee_angular_velocity(const ChainModel& chain, const VecX& q, const VecX& qdot,
                                 double h = 1e-6);

/// Central-difference d/dt of the mass matrix along qdot.
MatX numeric_mass_matrix_dot(const ChainModel& chain, const VecX& q, const VecX& qdot,
                             double h = 1e-6);

/// Central-difference gradient of the potential energy.
VecX numeric_potential_gradient(const ChainModel& chain, const VecX& q, double h = 1e-6);

/// Synthetic straight-line trace with minimum-jerk timing
/// s(u) = 10u^3 - 15u^4 + 6u^5: analytically bell-shaped, symmetric, and
/// single-peaked. Only t, x, and speed are populated.
SimTrace min_jerk_trace(const Vec3& from, const Vec3& to, double duration, int samples);

} // namespace reachsim::verify
