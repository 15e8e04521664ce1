#include "gaitforge/env.hpp"

#include <cmath>

#include "gaitforge/rng.hpp"

namespace gaitforge {

RobotModel RobotModel::defaults() {
  RobotModel m;
  m.torso_inertia = Vec3{0.025, 0.045, 0.035}.asDiagonal();
  const double half_len = 0.125;
  const double half_width = 0.068;
  m.legs[static_cast<int>(Leg::FL)].hip_offset = {half_len, 0.0, -half_width};
  m.legs[static_cast<int>(Leg::FR)].hip_offset = {half_len, 0.0, half_width};
  m.legs[static_cast<int>(Leg::BL)].hip_offset = {-half_len, 0.0, -half_width};
  m.legs[static_cast<int>(Leg::BR)].hip_offset = {-half_len, 0.0, half_width};
  return m;
}

void RobotModel::validate() const {
  if (!(torso_mass > 0.0)) throw ConfigError("robot: mass must be positive");
  for (int i = 0; i < 3; ++i)
    if (!(torso_inertia(i, i) > 0.0))
      throw ConfigError("robot: inertia diagonal must be positive");
  if (!(torque_cap > 0.0)) throw ConfigError("robot: torque cap must be > 0");
  if (!(nominal_height > 0.0))
    throw ConfigError("robot: nominal height must be > 0");
  if (!(joint_inertia > 0.0))
    throw ConfigError("robot: joint inertia must be > 0");
  if ((gains.kp.array() <= 0.0).any() || (gains.kd.array() < 0.0).any())
    throw ConfigError("robot: PD gains must be positive");
  if (!(radius_bounds.w_min > 0.0) ||
      !(radius_bounds.w_max > radius_bounds.w_min))
    throw ConfigError("robot: bad radius bounds");
  for (const auto& leg : legs) leg.validate();
}

void ContactParams::validate() const {
  if (stiffness < 0.0 || damping < 0.0 || friction < 0.0)
    throw ConfigError("contact: parameters must be nonnegative");
  if (friction > 1.5) throw ConfigError("contact: friction must be <= 1.5");
}

void EnvParams::validate() const {
  if (!(substep_dt > 0.0) || substep_dt > 0.002)
    throw ConfigError("env: substep_dt must be in (0, 2ms]");
  if (!(step_duration > substep_dt))
    throw ConfigError("env: step_duration must exceed substep_dt");
  if (rewards.w_vel < 0.0 || rewards.w_energy < 0.0)
    throw ConfigError("env: reward weights must be nonnegative");
  if (reset_perturbation < 0.0)
    throw ConfigError("env: reset perturbation must be nonnegative");
  contact.validate();
}

bool WorldState::finite() const {
  return base_pos.allFinite() && base_vel.allFinite() &&
         base_angvel.allFinite() && q.allFinite() && qd.allFinite() &&
         std::isfinite(base_orientation.w()) && std::isfinite(step_energy);
}

double compute_reward(double delta, double energy, const RewardWeights& w) {
  return w.w_vel * delta - w.w_energy * energy;
}

double accumulate_energy(const Vec12& tau, const Vec12& qd, double dt,
                         EnergyMode mode) {
  double sum = 0.0;
  for (int j = 0; j < kStateDim; ++j) {
    const double p = tau[j] * qd[j];
    switch (mode) {
      case EnergyMode::PositiveWork: sum += std::max(0.0, p); break;
      case EnergyMode::Signed: sum += p; break;
      case EnergyMode::Absolute: sum += std::abs(p); break;
    }
  }
  return sum * dt;
}

Attitude attitude_of(const Quat& q) {
  const Mat3 r = q.toRotationMatrix();
  const Vec3 fwd = r.col(0);
  const Vec3 right = r.col(2);
  Attitude a;
  a.pitch = std::asin(std::clamp(fwd.y(), -1.0, 1.0));
  a.roll = std::asin(std::clamp(right.y(), -1.0, 1.0));
  a.yaw = std::atan2(-fwd.z(), fwd.x());
  return a;
}

WorldState physics_substep(const WorldState& world, const RobotModel& model,
                           const Vec12& joint_torques,
                           const std::array<ContactPoint, kNumLegs>& feet,
                           const ContactParams& contact, double dt,
                           const Vec3& gravity);

namespace {

Vec3 contact_force(const ContactPoint& foot, const ContactParams& contact) {
  const double pen = contact.ground_height - foot.position_world.y();
  if (pen <= 0.0) return Vec3::Zero();
  double normal = contact.stiffness * pen -
                  contact.damping * foot.velocity_world.y();
  normal = std::max(0.0, normal);

  Vec3 tangential{-foot.velocity_world.x(), 0.0, -foot.velocity_world.z()};
  tangential *= contact.damping;
  const double cap = contact.friction * normal;
  const double mag = tangential.norm();
  if (mag > cap && mag > 0.0) tangential *= cap / mag;

  return Vec3{tangential.x(), normal, tangential.z()};
}

}  // namespace

WorldState physics_substep(const WorldState& world, const RobotModel& model,
                           const Vec12& joint_torques,
                           const std::array<ContactPoint, kNumLegs>& feet,
                           const ContactParams& contact, double dt,
                           const Vec3& gravity) {
  if (!(dt > 0.0) || dt > 0.002)
    throw std::invalid_argument("physics_substep: dt must be in (0, 2ms]");

  WorldState next = world;

  // Joints: second-order systems under the applied torque.
  for (int j = 0; j < kStateDim; ++j) {
    const double qdd =
        (joint_torques[j] - model.joint_viscous * world.qd[j]) /
        model.joint_inertia;
    next.q[j] = world.q[j] + world.qd[j] * dt + 0.5 * qdd * dt * dt;
    next.qd[j] = world.qd[j] + qdd * dt;
  }

  // Base: gravity plus the summed contact wrench about the COM.
  Vec3 force = model.torso_mass * gravity;
  Vec3 torque = Vec3::Zero();
  for (const auto& foot : feet) {
    const Vec3 f = contact_force(foot, contact);
    force += f;
    torque += (foot.position_world - world.base_pos).cross(f);
  }

  const Vec3 accel = force / model.torso_mass;
  next.base_pos = world.base_pos + world.base_vel * dt + 0.5 * accel * dt * dt;
  next.base_vel = world.base_vel + accel * dt;

  const Mat3 r = world.base_orientation.toRotationMatrix();
  const Mat3 inertia_world = r * model.torso_inertia * r.transpose();
  const Vec3 ang_accel = inertia_world.ldlt().solve(
      torque - world.base_angvel.cross(inertia_world * world.base_angvel));
  next.base_angvel = world.base_angvel + ang_accel * dt;

  const Vec3 rot = next.base_angvel * dt;
  const double angle = rot.norm();
  if (angle > 0.0) {
    const Quat dq(Eigen::AngleAxisd(angle, rot / angle));
    next.base_orientation = (dq * world.base_orientation).normalized();
  }

  if (!next.finite()) throw EpisodeDiverged("non-finite state after substep");
  return next;
}

WorldState physics_substep(const WorldState& world, const RobotModel& model,
                           const Vec12& joint_torques,
                           const std::array<ContactPoint, kNumLegs>& feet,
                           const ContactParams& contact, double dt) {
  return physics_substep(world, model, joint_torques, feet, contact, dt,
                         Vec3{0.0, -9.81, 0.0});
}

QuadrupedEnv::QuadrupedEnv(RobotModel model, EnvParams params, GaitConfig gait)
    : model_(std::move(model)), params_(std::move(params)),
      gait_(std::move(gait)) {
  model_.validate();
  params_.validate();
}

Vec3 QuadrupedEnv::foot_world(int leg) const {
  const LegGeometry& geom = model_.legs[leg];
  const LegAngles angles{world_.q[leg * 3 + 0], world_.q[leg * 3 + 1],
                         world_.q[leg * 3 + 2]};
  const Vec3 local = geom.hip_offset + forward_kinematics(geom, angles).position;
  return world_.base_pos + world_.base_orientation * local;
}

JointState QuadrupedEnv::reset(uint64_t seed) {
  world_ = WorldState{};
  world_.base_pos = Vec3{0.0, model_.nominal_height, 0.0};
  world_.phase = PhaseState{0.0, params_.step_duration};

  // Nominal stance: every foot at mid-range radius straight under its hip.
  const double w_mid =
      0.5 * (model_.radius_bounds.w_min + model_.radius_bounds.w_max);
  RandomStream rng(mix_seed(seed, 0x7265736574ULL /*reset*/));
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const FootPoint target{Vec3{0.0, -w_mid, 0.0}};
    const LegAngles a =
        inverse_kinematics(model_.legs[leg], target, KneeBranch::Backward);
    world_.q[leg * 3 + 0] =
        a.abduction + params_.reset_perturbation * rng.uniform(-1.0, 1.0);
    world_.q[leg * 3 + 1] =
        a.hip + params_.reset_perturbation * rng.uniform(-1.0, 1.0);
    world_.q[leg * 3 + 2] =
        a.knee + params_.reset_perturbation * rng.uniform(-1.0, 1.0);
  }

  for (int leg = 0; leg < kNumLegs; ++leg)
    prev_foot_world_[leg] = foot_world(leg);
  have_prev_targets_ = false;
  done_ = false;
  steps_taken_ = 0;
  time_ = 0.0;
  trace_.clear();
  return JointState(world_.q);
}

StepResult QuadrupedEnv::step_gait(const ControlPointSet& actions) {
  return step_gait(actions, gait_.leg_planes, gait_.phase_offsets);
}

StepResult QuadrupedEnv::step_gait(
    const ControlPointSet& actions,
    const std::array<GaitPlane, kNumLegs>& planes,
    const std::array<double, kNumLegs>& offsets) {
  if (done_)
    throw std::logic_error("step_gait called on a finished episode");

  const FootTrajectory traj = build_trajectory(actions);
  const int n_sub =
      std::max(1, static_cast<int>(std::lround(params_.step_duration /
                                               params_.substep_dt)));
  const double dt = params_.substep_dt;
  const double phi_start = world_.phase.phi;

  const Vec3 start_pos = world_.base_pos;
  const double start_yaw = attitude_of(world_.base_orientation).yaw;
  double yaw_accum = 0.0;
  double prev_yaw = start_yaw;

  world_.step_energy = 0.0;
  ClampCounter clamps;
  bool fell = false;
  // New control points mean a fresh target track; no velocity feedforward
  // across the boundary jump.
  have_prev_targets_ = false;
  trace_.clear();
  trace_.reserve(n_sub);

  for (int k = 1; k <= n_sub; ++k) {
    // Exact boundary landing: the final substep puts phi on a multiple of
    // pi bit-exactly.
    const double phi =
        k == n_sub ? wrap_two_pi(phi_start + M_PI)
                   : wrap_two_pi(phi_start + M_PI * k / n_sub);

    PhaseState sub_phase{phi, params_.step_duration};
    Vec12 targets;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const FootPoint target = foot_target(traj, sub_phase, offsets[leg],
                                           planes[leg], model_.foot_box,
                                           &clamps);
      const LegAngles a = inverse_kinematics(model_.legs[leg], target,
                                             KneeBranch::Backward);
      targets[leg * 3 + 0] = a.abduction;
      targets[leg * 3 + 1] = a.hip;
      targets[leg * 3 + 2] = a.knee;
    }

    const Vec12 target_vel = have_prev_targets_
                                 ? ((targets - prev_targets_) / dt).eval()
                                 : Vec12::Zero().eval();
    prev_targets_ = targets;
    have_prev_targets_ = true;

    Vec12 tau = model_.gains.kp.cwiseProduct(targets - world_.q) +
                model_.gains.kd.cwiseProduct(target_vel - world_.qd);
    tau = tau.cwiseMax(-model_.torque_cap).cwiseMin(model_.torque_cap);

    world_.step_energy +=
        accumulate_energy(tau, world_.qd, dt, params_.energy_mode);

    std::array<ContactPoint, kNumLegs> feet;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const Vec3 p = foot_world(leg);
      feet[leg].position_world = p;
      feet[leg].velocity_world = (p - prev_foot_world_[leg]) / dt;
      prev_foot_world_[leg] = p;
    }

    world_ = physics_substep(world_, model_, tau, feet, params_.contact, dt,
                             params_.gravity);
    world_.phase.phi = phi;
    time_ += dt;

    const Attitude att = attitude_of(world_.base_orientation);
    double dyaw = att.yaw - prev_yaw;
    if (dyaw > M_PI) dyaw -= 2.0 * M_PI;
    if (dyaw < -M_PI) dyaw += 2.0 * M_PI;
    yaw_accum += dyaw;
    prev_yaw = att.yaw;

    if (world_.base_pos.y() <
            params_.fall_height_fraction * model_.nominal_height ||
        std::abs(att.roll) > params_.fall_attitude_rad ||
        std::abs(att.pitch) > params_.fall_attitude_rad)
      fell = true;

    trace_.push_back(TraceRow{time_, phi, world_.base_pos, att, world_.q});
  }

  StepResult result;
  result.info.base_displacement = world_.base_pos - start_pos;
  result.info.yaw_delta = yaw_accum;
  result.info.delta_energy = world_.step_energy;
  result.info.clamp_events = static_cast<int>(clamps.events);
  result.info.substeps = n_sub;

  switch (gait_.reward_axis) {
    case RewardAxis::PlusX: result.info.delta = result.info.base_displacement.x(); break;
    case RewardAxis::MinusX: result.info.delta = -result.info.base_displacement.x(); break;
    case RewardAxis::PlusZ: result.info.delta = result.info.base_displacement.z(); break;
    case RewardAxis::PlusYaw: result.info.delta = yaw_accum; break;
  }
  result.reward =
      compute_reward(result.info.delta, result.info.delta_energy,
                     params_.rewards);
  result.state = JointState(world_.q);
  done_ = fell;
  result.done = fell;
  ++steps_taken_;
  return result;
}

JointState nominal_stance_state(const RobotModel& model) {
  const double w_mid =
      0.5 * (model.radius_bounds.w_min + model.radius_bounds.w_max);
  Vec12 q;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const LegAngles a = inverse_kinematics(
        model.legs[leg], FootPoint{Vec3{0.0, -w_mid, 0.0}},
        KneeBranch::Backward);
    q[leg * 3 + 0] = a.abduction;
    q[leg * 3 + 1] = a.hip;
    q[leg * 3 + 2] = a.knee;
  }
  return JointState(q);
}

double rollout_return(QuadrupedEnv& env, const PolicyMatrix& policy,
                      const RadiusBounds& box, int gait_steps, uint64_t seed) {
  JointState state = env.reset(seed);
  double total = 0.0;
  for (int step = 0; step < gait_steps; ++step) {
    const StepResult r = env.step_gait(act(policy, state, box));
    total += r.reward;
    state = r.state;
    if (r.done) break;
  }
  return total;
}

}  // namespace gaitforge
