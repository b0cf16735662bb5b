#include "reachsim/sim_engine.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace reachsim {

void validate_sim_config(const SimConfig& config, int dof) {
  if (!(config.dt > 0.0)) throw std::invalid_argument("sim config: dt must be > 0");
  if (!(config.max_time >= config.dt)) throw std::invalid_argument("sim config: max_time must be >= dt");
  if (!(config.stop_position_tol > 0.0) || !(config.stop_speed_tol > 0.0)) {
    throw std::invalid_argument("sim config: stop tolerances must be > 0");
  }
  if (config.initial_q.size() != 0 && config.initial_q.size() != dof) {
    throw std::invalid_argument("sim config: initial_q must have length " + std::to_string(dof));
  }
  for (const DisturbanceSpec& d : config.disturbances) {
    if (d.joint < 0 || d.joint >= dof) {
      throw std::invalid_argument("sim config: disturbance joint index out of range");
    }
    if (d.t1 < d.t0) throw std::invalid_argument("sim config: disturbance window has t1 < t0");
  }
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::timeout: return "timeout";
    case Termination::numerical_failure: return "numerical_failure";
    default: return "unknown";
  }
}

JointState rk4_step(const ChainModel& chain, const JointState& state, const VecX& applied_torque,
                    const std::function<VecX(double)>& disturbance_at, double t, double dt,
                    bool friction_on) {
  auto accel = [&](const VecX& q, const VecX& qd, double at) {
    return forward_dynamics(chain, JointState(q, qd), applied_torque, disturbance_at(at), friction_on);
  };

  const VecX& q = state.q;
  const VecX& qd = state.qdot;

  const VecX k1q = qd;
  const VecX k1v = accel(q, qd, t);
  const VecX k2q = qd + 0.5 * dt * k1v;
  const VecX k2v = accel(q + 0.5 * dt * k1q, qd + 0.5 * dt * k1v, t + 0.5 * dt);
  const VecX k3q = qd + 0.5 * dt * k2v;
  const VecX k3v = accel(q + 0.5 * dt * k2q, qd + 0.5 * dt * k2v, t + 0.5 * dt);
  const VecX k4q = qd + dt * k3v;
  const VecX k4v = accel(q + dt * k3q, qd + dt * k3v, t + dt);

  JointState next;
  next.q = q + (dt / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  next.qdot = qd + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  next.qddot = k1v;
  return next;
}

Simulator::Simulator(const ChainModel& chain, const ControllerParams& params, const SimConfig& config)
    : nominal_(chain), plant_(perturb_mass(chain, config.mass_perturbation)), params_(params),
      config_(config) {
  validate_sim_config(config, chain.dof());
  validate_controller_params(params, chain.dof());

  params_.gravity_comp = config.gravity_comp_on;
  params_.friction_comp = config.gravity_comp_on && config.friction_on;
  params_.observer.enabled = config.observer_on;

  const int n = chain.dof();
  VecX q0 = config.initial_q.size() == n ? config.initial_q : VecX::Zero(n);
  joint_state_ = JointState(q0, VecX::Zero(n));
  controller_state_ = make_controller_state(nominal_, params_, q0, config.stop_position_tol);
}

VecX Simulator::disturbance_at(double t) const {
  VecX d = VecX::Zero(nominal_.dof());
  for (const DisturbanceSpec& spec : config_.disturbances) {
    if (t >= spec.t0 && t < spec.t1) d[spec.joint] += spec.torque;
  }
  return d;
}

TraceRecord Simulator::snapshot() const {
  TraceRecord rec;
  rec.t = time_;
  rec.q = joint_state_.q;
  rec.qdot = joint_state_.qdot;

  const FrameSet fs = forward_kinematics(nominal_, joint_state_);
  const JacobianPair J = jacobian(nominal_, joint_state_);
  rec.x = fs.x;
  rec.xdot = J.J.bottomRows(3) * joint_state_.qdot;
  rec.dx_norm = (fs.x - params_.target).norm();
  rec.speed = rec.xdot.norm();

  // Non-mutating controller view of this instant.
  rec.u_raw = raw_control(params_, controller_state_, joint_state_.qdot, J, fs.x);
  rec.u_filtered = controller_state_.filter_outputs;
  rec.dhat = controller_state_.disturbance_estimate;
  if (controller_state_.pure_damping) {
    rec.Kv_diag = params_.C;
    rec.Fmus_diag = VecX::Zero(nominal_.dof());
  } else {
    rec.Kv_diag = damping_diag(params_, rec.dx_norm, controller_state_.dx0_norm);
    rec.Fmus_diag = muscle_diag(params_, rec.dx_norm, controller_state_.dx0_norm);
  }
  return rec;
}

bool Simulator::converged() const {
  const FrameSet fs = forward_kinematics(nominal_, joint_state_);
  const JacobianPair J = jacobian(nominal_, joint_state_);
  const double dx = (fs.x - params_.target).norm();
  const double speed = (J.J.bottomRows(3) * joint_state_.qdot).norm();
  return dx < config_.stop_position_tol && speed < config_.stop_speed_tol;
}

TraceRecord Simulator::step() {
  TraceRecord rec = snapshot();

  last_output_ = control_step(nominal_, params_, controller_state_, joint_state_, config_.dt);
  rec.u_raw = last_output_.u_raw;
  rec.u_filtered = last_output_.u_filtered;
  rec.Kv_diag = last_output_.Kv_diag;
  rec.Fmus_diag = last_output_.Fmus_diag;
  rec.dhat = controller_state_.disturbance_estimate;

  auto dist = [this](double t) { return disturbance_at(t); };
  joint_state_ = rk4_step(plant_, joint_state_, last_output_.u_command, dist, time_, config_.dt,
                          config_.friction_on);
  time_ += config_.dt;

  if (!joint_state_.q.allFinite() || !joint_state_.qdot.allFinite()) {
    throw std::runtime_error("simulation diverged at t = " + std::to_string(time_) +
                             " (non-finite joint state)");
  }
  return rec;
}

SimTrace run(const ChainModel& chain, const ControllerParams& params, const SimConfig& config) {
  Simulator sim(chain, params, config);

  SimTrace trace;
  trace.dof = chain.dof();

  const long max_steps = std::lround(std::ceil(config.max_time / config.dt));
  try {
    for (long k = 0; k < max_steps; ++k) {
      trace.records.push_back(sim.step());
      if (sim.converged()) {
        trace.termination = Termination::converged;
        break;
      }
    }
    if (trace.termination != Termination::converged) {
      trace.termination = Termination::timeout;
    }
    trace.records.push_back(sim.snapshot());
  } catch (const std::exception& e) {
    trace.termination = Termination::numerical_failure;
    trace.failure_message = e.what();
  }
  trace.final_time = sim.time();
  return trace;
}

namespace {

void append_header_block(std::string& h, const char* stem, int n) {
  for (int i = 1; i <= n; ++i) {
    h += ',';
    h += stem;
    h += std::to_string(i);
  }
}

void append_values(std::string& row, const VecX& v) {
  char buf[32];
  for (int i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), ",%.17g", v[i]);
    row += buf;
  }
}

} // namespace

void write_trace_csv(const SimTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file for writing: " + path);

  const int n = trace.dof;
  std::string header = "t";
  append_header_block(header, "q", n);
  append_header_block(header, "qd", n);
  header += ",x,y,z,vx,vy,vz,dx_norm,speed";
  append_header_block(header, "u_raw", n);
  append_header_block(header, "u_filt", n);
  append_header_block(header, "dhat", n);
  append_header_block(header, "kv", n);
  append_header_block(header, "fmus", n);
  out << header << "\n";

  char buf[32];
  for (const TraceRecord& r : trace.records) {
    std::string row;
    std::snprintf(buf, sizeof(buf), "%.17g", r.t);
    row += buf;
    append_values(row, r.q);
    append_values(row, r.qdot);
    append_values(row, VecX(r.x));
    append_values(row, VecX(r.xdot));
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", r.dx_norm, r.speed);
    row += buf;
    append_values(row, r.u_raw);
    append_values(row, r.u_filtered);
    append_values(row, r.dhat);
    append_values(row, r.Kv_diag);
    append_values(row, r.Fmus_diag);
    out << row << "\n";
  }
}

SimTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);

  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw std::runtime_error("trace file " + path + ": row 1: missing header");
  }

  // Infer dof from the header: columns are 1 + 7n + 8.
  size_t cols = 1;
  for (char c : line) {
    if (c == ',') ++cols;
  }
  if (cols < 9 || (cols - 9) % 7 != 0) {
    throw std::runtime_error("trace file " + path + ": row 1: unexpected column count " +
                             std::to_string(cols));
  }
  const int n = static_cast<int>((cols - 9) / 7);

  SimTrace trace;
  trace.dof = n;

  size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    vals.reserve(cols);
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        vals.push_back(v);
      } catch (const std::exception&) {
        throw std::runtime_error("trace file " + path + ": row " + std::to_string(row_no) +
                                 ": bad numeric cell '" + cell + "'");
      }
    }
    if (vals.size() != cols) {
      throw std::runtime_error("trace file " + path + ": row " + std::to_string(row_no) +
                               ": expected " + std::to_string(cols) + " cells, got " +
                               std::to_string(vals.size()));
    }

    TraceRecord r;
    size_t at = 0;
    auto take_vec = [&](int len) {
      VecX v(len);
      for (int i = 0; i < len; ++i) v[i] = vals[at++];
      return v;
    };
    r.t = vals[at++];
    r.q = take_vec(n);
    r.qdot = take_vec(n);
    r.x = Vec3(take_vec(3));
    r.xdot = Vec3(take_vec(3));
    r.dx_norm = vals[at++];
    r.speed = vals[at++];
    r.u_raw = take_vec(n);
    r.u_filtered = take_vec(n);
    r.dhat = take_vec(n);
    r.Kv_diag = take_vec(n);
    r.Fmus_diag = take_vec(n);
    trace.records.push_back(std::move(r));
  }
  if (!trace.records.empty()) trace.final_time = trace.records.back().t;
  return trace;
}

} // namespace reachsim
