#include "reachsim/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace reachsim {

namespace {

void check_vec(const ChainModel& chain, const VecX& v, const char* name) {
  if (v.size() != chain.dof()) {
    throw std::invalid_argument(std::string(name) + ": expected length " + std::to_string(chain.dof()) +
                                ", got " + std::to_string(v.size()));
  }
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(name) + ": non-finite entries");
  }
}

} // namespace

VecX ne_alpha(const ChainModel& chain, const VecX& q, const VecX& qdot, const VecX& qdot_aux,
              const VecX& qddot, bool gravity_on) {
  check_vec(chain, q, "q");
  check_vec(chain, qdot, "qdot");
  check_vec(chain, qdot_aux, "qdot_aux");
  check_vec(chain, qddot, "qddot");
  const int n = chain.dof();

  // Base-frame geometry of every link.
  std::vector<Vec3> axis(n), offset(n), com(n);
  std::vector<Mat3> inertia(n);
  {
    Mat3 R = Mat3::Identity();
    for (int i = 0; i < n; ++i) {
      const LinkParams& lk = chain.links[i];
      axis[i] = R * lk.joint_axis;
      R = R * Eigen::AngleAxisd(q[i], lk.joint_axis).toRotationMatrix();
      offset[i] = R * lk.link_offset;
      com[i] = R * lk.com_offset;
      inertia[i] = R * lk.inertia * R.transpose();
    }
  }

  // Outward pass: velocities and accelerations, auxiliary velocity in every
  // velocity product. Gravity enters as base acceleration -g.
  std::vector<Vec3> w(n), wa(n), wd(n), acc_origin(n), acc_com(n);
  Vec3 w_prev = Vec3::Zero();
  Vec3 wa_prev = Vec3::Zero();
  Vec3 wd_prev = Vec3::Zero();
  Vec3 aO_prev = gravity_on ? Vec3(-chain.gravity) : Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec3& z = axis[i];
    w[i] = w_prev + qdot[i] * z;
    wa[i] = wa_prev + qdot_aux[i] * z;
    wd[i] = wd_prev + qddot[i] * z + qdot[i] * wa_prev.cross(z);
    acc_origin[i] = aO_prev + wd[i].cross(offset[i]) + w[i].cross(wa[i].cross(offset[i]));
    acc_com[i] = acc_origin[i] + wd[i].cross(com[i]) + w[i].cross(wa[i].cross(com[i]));
    w_prev = w[i];
    wa_prev = wa[i];
    wd_prev = wd[i];
    aO_prev = acc_origin[i];
  }

  // Inward pass: inter-link force/torque balance about the link COM, with
  // the gyroscopic product taken against the auxiliary velocity.
  VecX u(n);
  Vec3 f_next = Vec3::Zero();
  Vec3 tau_next = Vec3::Zero();
  for (int i = n - 1; i >= 0; --i) {
    const double m = chain.links[i].mass;
    const Vec3 f_i = f_next + m * acc_com[i];
    const Vec3 tau_i = tau_next - f_i.cross(offset[i] + com[i]) + f_next.cross(com[i]) +
                       inertia[i] * wd[i] + wa[i].cross(inertia[i] * w[i]);
    u[i] = tau_i.dot(axis[i]);
    f_next = f_i;
    tau_next = tau_i;
  }
  return u;
}

MatX mass_matrix(const ChainModel& chain, const VecX& q) {
  check_vec(chain, q, "q");
  const int n = chain.dof();
  const VecX zero = VecX::Zero(n);

  MatX M(n, n);
  for (int j = 0; j < n; ++j) {
    VecX probe = VecX::Zero(n);
    probe[j] = 1.0;
    M.col(j) = ne_alpha(chain, q, zero, zero, probe, false);
  }

  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) {
    throw std::runtime_error("mass_matrix: assembled matrix asymmetric by " + std::to_string(asym));
  }
  return 0.5 * (M + M.transpose());
}

MatX coriolis_matrix(const ChainModel& chain, const VecX& q, const VecX& qdot) {
  check_vec(chain, q, "q");
  check_vec(chain, qdot, "qdot");
  const int n = chain.dof();
  const VecX zero = VecX::Zero(n);

  MatX C(n, n);
  for (int j = 0; j < n; ++j) {
    VecX probe = VecX::Zero(n);
    probe[j] = 1.0;
    C.col(j) = ne_alpha(chain, q, qdot, probe, zero, false);
  }
  return C;
}

VecX gravity_vector(const ChainModel& chain, const VecX& q) {
  check_vec(chain, q, "q");
  const VecX zero = VecX::Zero(chain.dof());
  return ne_alpha(chain, q, zero, zero, zero, true);
}

VecX friction_torque(const ChainModel& chain, const VecX& qdot) {
  check_vec(chain, qdot, "qdot");
  const int n = chain.dof();
  VecX fr(n);
  for (int i = 0; i < n; ++i) {
    const LinkParams& lk = chain.links[i];
    fr[i] = lk.viscous_coeff * qdot[i] + lk.coulomb_coeff * std::tanh(lk.coulomb_slope * qdot[i]);
  }
  return fr;
}

DynamicsTerms dynamics_terms(const ChainModel& chain, const VecX& q, const VecX& qdot) {
  DynamicsTerms t;
  t.M = mass_matrix(chain, q);
  t.C = coriolis_matrix(chain, q, qdot);
  t.G = gravity_vector(chain, q);
  t.Fr = friction_torque(chain, qdot);
  return t;
}

VecX forward_dynamics(const ChainModel& chain, const JointState& state, const VecX& applied_torque,
                      const VecX& external_disturbance, bool friction_on) {
  check_vec(chain, applied_torque, "applied_torque");
  check_vec(chain, external_disturbance, "external_disturbance");
  const int n = chain.dof();

  const MatX M = mass_matrix(chain, state.q);
  // C qdot + G in one recursion call.
  const VecX bias = ne_alpha(chain, state.q, state.qdot, state.qdot, VecX::Zero(n), true);

  VecX rhs = applied_torque + external_disturbance - bias;
  if (friction_on) rhs -= friction_torque(chain, state.qdot);

  Eigen::LLT<MatX> llt(M);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<MatX> es(M);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    const double cond = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
    throw SingularConfigurationError(
        "forward_dynamics: inertia matrix not positive definite (min eig " + std::to_string(lo) +
        ", condition estimate " + std::to_string(cond) + ")");
  }
  return llt.solve(rhs);
}

double potential_energy(const ChainModel& chain, const VecX& q) {
  check_vec(chain, q, "q");
  const int n = chain.dof();
  const JointState st(q, VecX::Zero(n));
  const FrameSet fs = forward_kinematics(chain, st);
  double V = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 com_world = fs.origins[i] + fs.rotations[i] * chain.links[i].com_offset;
    V -= chain.links[i].mass * chain.gravity.dot(com_world);
  }
  return V;
}

double kinetic_energy(const ChainModel& chain, const VecX& q, const VecX& qdot) {
  const MatX M = mass_matrix(chain, q);
  return 0.5 * qdot.dot(M * qdot);
}

} // namespace reachsim
