#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace reachsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Config document is structurally broken (missing field, wrong type).
class ChainSchemaError : public std::runtime_error {
public:
  explicit ChainSchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// Config parsed fine but a physical invariant is violated.
/// Message names the invariant and the offending link (1-based).
class ChainValidationError : public std::runtime_error {
public:
  explicit ChainValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// All physical parameters of one link and the joint that drives it.
///
/// Frame convention: joint i rotates about `joint_axis` (unit vector in the
/// parent frame, through the parent frame's origin). `link_offset` is the
/// vector from the parent origin to this link's frame origin, expressed in
/// this link's frame, so it rotates with the joint. `com_offset` is the
/// vector from this link's origin to its center of mass, in this link's frame.
struct LinkParams {
  double mass = 0.0;              // kg
  Vec3 com_offset = Vec3::Zero(); // m, r_{i,B_i} in link frame
  Mat3 inertia = Mat3::Zero();    // kg*m^2, about the COM, in link frame
  Vec3 joint_axis = Vec3::UnitZ();// unit vector in parent frame
  Vec3 link_offset = Vec3::Zero();// m, r_{i-1,i} in link frame
  double viscous_coeff = 0.0;     // N*m*s/rad
  double coulomb_coeff = 0.0;     // N*m
  double coulomb_slope = 20.0;    // s/rad, slope of the smooth coulomb term
};

/// Immutable description of an N-joint serial revolute arm.
struct ChainModel {
  std::string name;
  std::vector<LinkParams> links;      // index 0 is joint/link 1
  Vec3 gravity = Vec3(0.0, 0.0, -9.81); // m/s^2

  int dof() const { return static_cast<int>(links.size()); }
};

/// Checks every LinkParams and ChainModel invariant; throws
/// ChainValidationError naming the violated invariant and link index.
void validate_chain(const ChainModel& chain);

/// Parses a JSON robot description (see README for the schema) and validates
/// it. Throws ChainSchemaError / ChainValidationError.
ChainModel load_chain(const std::string& config_text);

/// Reads and parses a robot description file.
ChainModel load_chain_file(const std::string& path);

/// Serializes a chain back to the JSON schema accepted by load_chain.
/// Round-trips field-exact: load_chain(serialize_chain(c)) == c.
std::string serialize_chain(const ChainModel& chain);

bool operator==(const LinkParams& a, const LinkParams& b);
bool operator==(const ChainModel& a, const ChainModel& b);

/// The built-in 7-DOF arm with the tabulated masses, link lengths, COM
/// distances, principal inertias and friction coefficients.
///
/// Axis assignment is a conventional anthropomorphic 7R (shoulder
/// yaw-pitch-roll, elbow pitch, wrist roll-pitch-roll = Z-Y-Z-Y-Z-Y-Z),
/// chosen so that the home configuration q = 0 places the end-effector at
/// (0.085, 0, -0.5585): the first link runs horizontally along +X and the
/// remaining links hang straight down.
ChainModel canonical_7dof();

/// Home configuration of canonical_7dof (all joints at zero).
VecX canonical_7dof_home();

/// Returns a copy with plant-side parameter mismatch applied: masses and
/// inertia tensors scaled by (1 + fraction). Friction is left untouched.
ChainModel perturb_mass(const ChainModel& chain, double fraction);

} // namespace reachsim
