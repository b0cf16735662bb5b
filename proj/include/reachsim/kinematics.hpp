#pragma once

#include "reachsim/chain_model.hpp"

namespace reachsim {

/// Joint positions/velocities/accelerations at one instant.
struct JointState {
  VecX q;     // rad
  VecX qdot;  // rad/s
  VecX qddot; // rad/s^2, zero when unspecified

  JointState() = default;
  explicit JointState(int n) : q(VecX::Zero(n)), qdot(VecX::Zero(n)), qddot(VecX::Zero(n)) {}
  JointState(VecX q_, VecX qdot_) : q(std::move(q_)), qdot(std::move(qdot_)) {
    qddot = VecX::Zero(q.size());
  }
  JointState(VecX q_, VecX qdot_, VecX qddot_)
      : q(std::move(q_)), qdot(std::move(qdot_)), qddot(std::move(qddot_)) {}
};

/// Base-frame poses of every link plus the quantities the controller and
/// Jacobian need: world joint axes e_i (through origin O_{i-1}) and the
/// vectors p_i from each joint origin to the end-effector.
struct FrameSet {
  std::vector<Mat3> rotations;   // R_i, link frame i -> base, size N
  std::vector<Vec3> origins;     // O_i, size N (O_0 is the base origin, implicit zero)
  std::vector<Vec3> joint_axes;  // e_i in base frame, size N
  std::vector<Vec3> joint_points;// O_{i-1}, point the axis of joint i passes through, size N
  Vec3 x = Vec3::Zero();         // end-effector position, = O_N
  std::vector<Vec3> p;           // p_i = x - O_{i-1}, size N
};

/// 6xN Jacobian with angular rows (1-3) stacked above linear rows (4-6),
/// and its time derivative.
struct JacobianPair {
  MatX J;
  MatX Jdot;
};

/// Poses of all link frames for the given configuration.
/// Throws std::invalid_argument on dimension mismatch.
FrameSet forward_kinematics(const ChainModel& chain, const JointState& state);

/// Geometric Jacobian (column i = [e_i; e_i x p_i]) and its analytic time
/// derivative. p_i moves with the end-effector and O_{i-1} so
/// pdot_i = xdot - Odot_{i-1}; edot_i = omega_{i-1} x e_i.
JacobianPair jacobian(const ChainModel& chain, const JointState& state);

} // namespace reachsim
