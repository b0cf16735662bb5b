#include "reachsim/verify.hpp"

#include <cmath>

namespace reachsim::verify {

ChainModel two_link_chain(const TwoLink& p, bool with_gravity) {
  ChainModel chain;
  chain.name = "two-link-planar";
  chain.gravity = with_gravity ? Vec3(0.0, -p.g, 0.0) : Vec3::Zero();

  LinkParams l1;
  l1.mass = p.m1;
  l1.joint_axis = Vec3::UnitZ();
  l1.link_offset = Vec3(p.l1, 0.0, 0.0);
  l1.com_offset = Vec3(p.c1 - p.l1, 0.0, 0.0);
  l1.inertia = Vec3(0.5 * p.I1, 0.5 * p.I1, p.I1).asDiagonal();
  l1.viscous_coeff = 0.0;
  l1.coulomb_coeff = 0.0;

  LinkParams l2 = l1;
  l2.mass = p.m2;
  l2.link_offset = Vec3(p.l2, 0.0, 0.0);
  l2.com_offset = Vec3(p.c2 - p.l2, 0.0, 0.0);
  l2.inertia = Vec3(0.5 * p.I2, 0.5 * p.I2, p.I2).asDiagonal();

  chain.links = {l1, l2};
  validate_chain(chain);
  return chain;
}

MatX two_link_mass(const TwoLink& p, const VecX& q) {
  const double c2 = std::cos(q[1]);
  MatX M(2, 2);
  M(0, 0) = p.m1 * p.c1 * p.c1 + p.m2 * (p.l1 * p.l1 + p.c2 * p.c2 + 2.0 * p.l1 * p.c2 * c2) + p.I1 + p.I2;
  M(0, 1) = p.m2 * (p.c2 * p.c2 + p.l1 * p.c2 * c2) + p.I2;
  M(1, 0) = M(0, 1);
  M(1, 1) = p.m2 * p.c2 * p.c2 + p.I2;
  return M;
}

MatX two_link_coriolis(const TwoLink& p, const VecX& q, const VecX& qdot) {
  const double h = -p.m2 * p.l1 * p.c2 * std::sin(q[1]);
  MatX C(2, 2);
  C(0, 0) = h * qdot[1];
  C(0, 1) = h * (qdot[0] + qdot[1]);
  C(1, 0) = -h * qdot[0];
  C(1, 1) = 0.0;
  return C;
}

VecX two_link_gravity(const TwoLink& p, const VecX& q) {
  VecX G(2);
  G[0] = (p.m1 * p.c1 + p.m2 * p.l1) * p.g * std::cos(q[0]) +
         p.m2 * p.c2 * p.g * std::cos(q[0] + q[1]);
  G[1] = p.m2 * p.c2 * p.g * std::cos(q[0] + q[1]);
  return G;
}

VecX two_link_inverse_dynamics(const TwoLink& p, const VecX& q, const VecX& qdot, const VecX& qddot) {
  return two_link_mass(p, q) * qddot + two_link_coriolis(p, q, qdot) * qdot + two_link_gravity(p, q);
}

MatX numeric_jacobian_dot(const ChainModel& chain, const VecX& q, const VecX& qdot, double h) {
  const JointState plus(q + h * qdot, qdot);
  const JointState minus(q - h * qdot, qdot);
  return (jacobian(chain, plus).J - jacobian(chain, minus).J) / (2.0 * h);
}

Vec3 numeric_ee_velocity(const ChainModel& chain, const VecX& q, const VecX& qdot, double h) {
  const VecX zero = VecX::Zero(q.size());
  const Vec3 xp = forward_kinematics(chain, JointState(q + h * qdot, zero)).x;
  const Vec3 xm = forward_kinematics(chain, JointState(q - h * qdot, zero)).x;
  return (xp - xm) / (2.0 * h);
}

Vec3 numeric_ee_acceleration(const ChainModel& chain, const VecX& q, const VecX& qdot,
                             const VecX& qddot, double h) {
  // x(t) sampled along the quadratic path q(t) = q + t qdot + t^2/2 qddot.
  const VecX zero = VecX::Zero(q.size());
  auto x_at = [&](double t) {
    return forward_kinematics(chain, JointState(q + t * qdot + 0.5 * t * t * qddot, zero)).x;
  };
  return (x_at(h) - 2.0 * x_at(0.0) + x_at(-h)) / (h * h);
}

Vec3 numeric_ee_angular_velocity(const ChainModel& chain, const VecX& q, const VecX& qdot, double h) {
  const VecX zero = VecX::Zero(q.size());
  const Mat3 Rp = forward_kinematics(chain, JointState(q + h * qdot, zero)).rotations.back();
  const Mat3 Rm = forward_kinematics(chain, JointState(q - h * qdot, zero)).rotations.back();
  const Mat3 R0 = forward_kinematics(chain, JointState(q, zero)).rotations.back();
  const Mat3 W = ((Rp - Rm) / (2.0 * h)) * R0.transpose(); // skew(omega)
  return Vec3(W(2, 1), W(0, 2), W(1, 0));
}

MatX numeric_mass_matrix_dot(const ChainModel& chain, const VecX& q, const VecX& qdot, double h) {
  return (mass_matrix(chain, q + h * qdot) - mass_matrix(chain, q - h * qdot)) / (2.0 * h);
}

VecX numeric_potential_gradient(const ChainModel& chain, const VecX& q, double h) {
  const int n = chain.dof();
  VecX grad(n);
  for (int i = 0; i < n; ++i) {
    VecX qp = q, qm = q;
    qp[i] += h;
    qm[i] -= h;
    grad[i] = (potential_energy(chain, qp) - potential_energy(chain, qm)) / (2.0 * h);
  }
  return grad;
}

SimTrace min_jerk_trace(const Vec3& from, const Vec3& to, double duration, int samples) {
  SimTrace trace;
  trace.dof = 0;
  trace.termination = Termination::converged;
  trace.final_time = duration;
  const Vec3 delta = to - from;
  for (int k = 0; k < samples; ++k) {
    const double t = duration * k / (samples - 1);
    const double u = t / duration;
    const double s = ((6.0 * u - 15.0) * u + 10.0) * u * u * u;
    const double sdot = ((30.0 * u - 60.0) * u + 30.0) * u * u / duration;
    TraceRecord rec;
    rec.t = t;
    rec.x = from + s * delta;
    rec.xdot = sdot * delta;
    rec.speed = rec.xdot.norm();
    trace.records.push_back(rec);
  }
  return trace;
}

} // namespace reachsim::verify
