#include "reachsim/chain_model.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace reachsim {

using nlohmann::json;

namespace {

std::string link_tag(int index1) { return "link " + std::to_string(index1); }

const json& require_field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) {
    throw ChainSchemaError("robot config: missing field '" + key + "' in " + where);
  }
  return obj.at(key);
}

double as_number(const json& v, const std::string& name) {
  if (!v.is_number()) {
    throw ChainSchemaError("robot config: field '" + name + "' must be a number");
  }
  return v.get<double>();
}

Vec3 as_vec3(const json& v, const std::string& name) {
  if (!v.is_array() || v.size() != 3) {
    throw ChainSchemaError("robot config: field '" + name + "' must be an array of 3 numbers");
  }
  Vec3 out;
  for (int k = 0; k < 3; ++k) out[k] = as_number(v.at(k), name);
  return out;
}

Mat3 as_inertia(const json& v, const std::string& name) {
  // order: xx, yy, zz, xy, yz, xz
  if (!v.is_array() || v.size() != 6) {
    throw ChainSchemaError("robot config: field '" + name + "' must be an array of 6 numbers (xx,yy,zz,xy,yz,xz)");
  }
  double c[6];
  for (int k = 0; k < 6; ++k) c[k] = as_number(v.at(k), name);
  Mat3 I;
  I << c[0], c[3], c[5],
       c[3], c[1], c[4],
       c[5], c[4], c[2];
  return I;
}

} // namespace

void validate_chain(const ChainModel& chain) {
  if (chain.links.empty()) {
    throw ChainValidationError("chain '" + chain.name + "': must have at least one link");
  }

  const double gnorm = chain.gravity.norm();
  if (gnorm > 1e-6 && std::abs(gnorm - 9.81) > 1e-6) {
    throw ChainValidationError("chain '" + chain.name + "': gravity magnitude must be 0 or 9.81, got " +
                               std::to_string(gnorm));
  }

  for (int i = 0; i < chain.dof(); ++i) {
    const LinkParams& lk = chain.links[i];
    const std::string tag = link_tag(i + 1);

    if (!(lk.mass > 0.0)) {
      throw ChainValidationError(tag + ": mass must be positive, got " + std::to_string(lk.mass));
    }
    if (!lk.com_offset.allFinite() || !lk.link_offset.allFinite() || !lk.inertia.allFinite()) {
      throw ChainValidationError(tag + ": parameters must be finite");
    }
    if ((lk.inertia - lk.inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw ChainValidationError(tag + ": inertia tensor must be symmetric");
    }

    Eigen::SelfAdjointEigenSolver<Mat3> es(lk.inertia);
    const Vec3 pm = es.eigenvalues(); // ascending principal moments
    if (pm[0] < -1e-12) {
      throw ChainValidationError(tag + ": inertia tensor must be positive semidefinite (min principal moment " +
                                 std::to_string(pm[0]) + ")");
    }
    // triangle inequalities on principal moments
    if (pm[0] + pm[1] < pm[2] - 1e-12) {
      throw ChainValidationError(tag + ": inertia principal moments violate the triangle inequality");
    }

    if (std::abs(lk.joint_axis.norm() - 1.0) > 1e-9) {
      throw ChainValidationError(tag + ": joint axis must be a unit vector, norm " +
                                 std::to_string(lk.joint_axis.norm()));
    }

    if (lk.viscous_coeff < 0.0) {
      throw ChainValidationError(tag + ": viscous friction coefficient must be nonnegative");
    }
    if (lk.coulomb_coeff < 0.0) {
      throw ChainValidationError(tag + ": coulomb friction coefficient must be nonnegative");
    }
    if (!(lk.coulomb_slope > 0.0)) {
      throw ChainValidationError(tag + ": coulomb slope must be positive");
    }
  }
}

ChainModel load_chain(const std::string& config_text) {
  json doc;
  try {
    doc = json::parse(config_text);
  } catch (const json::exception& e) {
    throw ChainSchemaError(std::string("robot config: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ChainSchemaError("robot config: top level must be an object");
  }

  ChainModel chain;
  chain.name = doc.value("name", std::string{});
  if (doc.contains("gravity")) {
    chain.gravity = as_vec3(doc.at("gravity"), "gravity");
  }

  const json& links = require_field(doc, "links", "top level");
  if (!links.is_array() || links.empty()) {
    throw ChainSchemaError("robot config: 'links' must be a non-empty array");
  }

  for (size_t i = 0; i < links.size(); ++i) {
    const json& lj = links.at(i);
    const std::string where = link_tag(static_cast<int>(i) + 1);
    if (!lj.is_object()) {
      throw ChainSchemaError("robot config: " + where + " must be an object");
    }
    LinkParams lk;
    lk.mass = as_number(require_field(lj, "mass", where), where + ".mass");
    lk.com_offset = as_vec3(require_field(lj, "com", where), where + ".com");
    lk.inertia = as_inertia(require_field(lj, "inertia", where), where + ".inertia");
    lk.joint_axis = as_vec3(require_field(lj, "axis", where), where + ".axis");
    lk.link_offset = as_vec3(require_field(lj, "offset", where), where + ".offset");

    const json& fr = require_field(lj, "friction", where);
    if (!fr.is_object()) {
      throw ChainSchemaError("robot config: " + where + ".friction must be an object");
    }
    lk.viscous_coeff = as_number(require_field(fr, "viscous", where + ".friction"), where + ".friction.viscous");
    lk.coulomb_coeff = as_number(require_field(fr, "coulomb", where + ".friction"), where + ".friction.coulomb");
    lk.coulomb_slope = fr.contains("slope") ? as_number(fr.at("slope"), where + ".friction.slope") : 20.0;

    chain.links.push_back(lk);
  }

  validate_chain(chain);
  return chain;
}

ChainModel load_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ChainSchemaError("robot config: cannot open file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return load_chain(ss.str());
}

std::string serialize_chain(const ChainModel& chain) {
  json doc;
  doc["name"] = chain.name;
  doc["gravity"] = {chain.gravity[0], chain.gravity[1], chain.gravity[2]};
  doc["links"] = json::array();
  for (const LinkParams& lk : chain.links) {
    json lj;
    lj["mass"] = lk.mass;
    lj["com"] = {lk.com_offset[0], lk.com_offset[1], lk.com_offset[2]};
    lj["inertia"] = {lk.inertia(0, 0), lk.inertia(1, 1), lk.inertia(2, 2),
                     lk.inertia(0, 1), lk.inertia(1, 2), lk.inertia(0, 2)};
    lj["axis"] = {lk.joint_axis[0], lk.joint_axis[1], lk.joint_axis[2]};
    lj["offset"] = {lk.link_offset[0], lk.link_offset[1], lk.link_offset[2]};
    lj["friction"] = {{"viscous", lk.viscous_coeff},
                      {"coulomb", lk.coulomb_coeff},
                      {"slope", lk.coulomb_slope}};
    doc["links"].push_back(lj);
  }
  return doc.dump(2);
}

bool operator==(const LinkParams& a, const LinkParams& b) {
  return a.mass == b.mass && a.com_offset == b.com_offset && a.inertia == b.inertia &&
         a.joint_axis == b.joint_axis && a.link_offset == b.link_offset &&
         a.viscous_coeff == b.viscous_coeff && a.coulomb_coeff == b.coulomb_coeff &&
         a.coulomb_slope == b.coulomb_slope;
}

bool operator==(const ChainModel& a, const ChainModel& b) {
  return a.name == b.name && a.gravity == b.gravity && a.links == b.links;
}

ChainModel canonical_7dof() {
  constexpr int n = 7;
  const double ixx[n] = {0.006, 0.012, 0.003, 0.005, 0.001, 0.002, 0.001};
  const double iyy[n] = {0.001, 0.002, 0.000, 0.001, 0.000, 0.001, 0.000};
  const double izz[n] = {0.006, 0.011, 0.003, 0.005, 0.001, 0.002, 0.001};
  const double len[n] = {0.085, 0.171, 0.069, 0.148, 0.095, 0.0, 0.0755};
  const double com[n] = {0.011, 0.091, 0.007, 0.051, 0.058, 0.0, 0.0185};
  const double mass[n] = {0.81, 2.096, 0.538, 0.407, 0.459, 0.396, 0.135};
  const double mu[n] = {3.704, 5.02, 1.359, 1.240, 0.607, 0.979, 0.778};
  const double eta[n] = {1.104, 2.086, 1.191, 1.016, 0.668, 0.794, 0.604};

  ChainModel chain;
  chain.name = "builtin:7dof";
  chain.gravity = Vec3(0.0, 0.0, -9.81);

  for (int i = 0; i < n; ++i) {
    LinkParams lk;
    lk.mass = mass[i];
    lk.inertia = Vec3(ixx[i], iyy[i], izz[i]).asDiagonal();
    // Shoulder yaw-pitch-roll, elbow pitch, wrist roll-pitch-roll.
    lk.joint_axis = (i % 2 == 0) ? Vec3::UnitZ() : Vec3::UnitY();
    // First link runs along +X, the rest hang along -Z; COM distances are
    // measured from the proximal joint, and the stored offset is from the
    // distal frame origin.
    const Vec3 dir = (i == 0) ? Vec3(Vec3::UnitX()) : Vec3(-Vec3::UnitZ());
    lk.link_offset = len[i] * dir;
    lk.com_offset = (com[i] - len[i]) * dir;
    lk.viscous_coeff = eta[i];
    lk.coulomb_coeff = mu[i];
    lk.coulomb_slope = 20.0;
    chain.links.push_back(lk);
  }

  validate_chain(chain);
  return chain;
}

VecX canonical_7dof_home() { return VecX::Zero(7); }

ChainModel perturb_mass(const ChainModel& chain, double fraction) {
  ChainModel out = chain;
  for (LinkParams& lk : out.links) {
    lk.mass *= (1.0 + fraction);
    lk.inertia *= (1.0 + fraction);
  }
  out.name = chain.name + (fraction != 0.0 ? "+perturbed" : "");
  return out;
}

} // namespace reachsim
