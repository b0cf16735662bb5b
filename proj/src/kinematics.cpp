#include "reachsim/kinematics.hpp"

#include <stdexcept>

namespace reachsim {

namespace {

void check_state(const ChainModel& chain, const JointState& state) {
  const int n = chain.dof();
  if (state.q.size() != n || state.qdot.size() != n ||
      (state.qddot.size() != 0 && state.qddot.size() != n)) {
    throw std::invalid_argument("joint state dimension does not match chain dof " + std::to_string(n));
  }
  if (!state.q.allFinite() || !state.qdot.allFinite() ||
      (state.qddot.size() != 0 && !state.qddot.allFinite())) {
    throw std::invalid_argument("joint state contains non-finite entries");
  }
}

} // namespace

FrameSet forward_kinematics(const ChainModel& chain, const JointState& state) {
  check_state(chain, state);
  const int n = chain.dof();

  FrameSet fs;
  fs.rotations.resize(n);
  fs.origins.resize(n);
  fs.joint_axes.resize(n);
  fs.joint_points.resize(n);
  fs.p.resize(n);

  Mat3 R = Mat3::Identity();
  Vec3 O = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    const LinkParams& lk = chain.links[i];
    fs.joint_points[i] = O;
    fs.joint_axes[i] = R * lk.joint_axis;
    R = R * Eigen::AngleAxisd(state.q[i], lk.joint_axis).toRotationMatrix();
    O = O + R * lk.link_offset;
    fs.rotations[i] = R;
    fs.origins[i] = O;
  }
  fs.x = O;
  for (int i = 0; i < n; ++i) fs.p[i] = fs.x - fs.joint_points[i];
  return fs;
}

JacobianPair jacobian(const ChainModel& chain, const JointState& state) {
  check_state(chain, state);
  const int n = chain.dof();
  const FrameSet fs = forward_kinematics(chain, state);

  JacobianPair jp;
  jp.J = MatX::Zero(6, n);
  jp.Jdot = MatX::Zero(6, n);

  // Origin velocities: the segment O_{i-1} -> O_i is rigid in link i.
  std::vector<Vec3> origin_vel(n + 1, Vec3::Zero()); // origin_vel[i] = d/dt O_i, O_0 fixed
  Vec3 omega = Vec3::Zero();                         // angular velocity of link i
  std::vector<Vec3> omega_parent(n);                 // angular velocity of link i-1
  for (int i = 0; i < n; ++i) {
    omega_parent[i] = omega;
    omega += state.qdot[i] * fs.joint_axes[i];
    const Vec3 prev = (i == 0) ? Vec3::Zero() : fs.origins[i - 1];
    origin_vel[i + 1] = origin_vel[i] + omega.cross(fs.origins[i] - prev);
  }
  const Vec3 xdot = origin_vel[n];

  for (int i = 0; i < n; ++i) {
    const Vec3& e = fs.joint_axes[i];
    const Vec3& p = fs.p[i];
    const Vec3 edot = omega_parent[i].cross(e);
    const Vec3 pdot = xdot - origin_vel[i];

    jp.J.col(i).head<3>() = e;
    jp.J.col(i).tail<3>() = e.cross(p);
    jp.Jdot.col(i).head<3>() = edot;
    jp.Jdot.col(i).tail<3>() = edot.cross(p) + e.cross(pdot);
  }
  return jp;
}

} // namespace reachsim
