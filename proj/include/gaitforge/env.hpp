#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gaitforge/gaits.hpp"
#include "gaitforge/kinematics.hpp"
#include "gaitforge/policy.hpp"
#include "gaitforge/trajectory.hpp"
#include "gaitforge/types.hpp"

namespace gaitforge {

struct PdGains {
  Vec12 kp = Vec12::Constant(30.0);  // N*m/rad
  Vec12 kd = Vec12::Constant(0.5);   // N*m*s/rad
};

struct RobotModel {
  double torso_mass = 4.0;                       // kg
  Mat3 torso_inertia = Mat3::Zero();             // kg*m^2, body frame
  std::array<LegGeometry, kNumLegs> legs{};
  JointLimits joint_limits;
  PdGains gains;
  double torque_cap = 4.0;        // N*m per joint
  double nominal_height = 0.16;   // m, standing torso height
  double joint_inertia = 0.004;   // kg*m^2 reflected at each joint
  double joint_viscous = 0.01;    // N*m*s/rad
  WorkspaceBox foot_box;
  RadiusBounds radius_bounds;

  static RobotModel defaults();
  void validate() const;
};

// Penalty-spring ground: normal spring-damper plus viscous tangential
// force capped by the Coulomb cone.
struct ContactParams {
  double stiffness = 5000.0;  // N/m
  double damping = 150.0;     // N*s/m
  double friction = 1.0;      // Coulomb coefficient
  double ground_height = 0.0; // m, world y of the ground plane

  void validate() const;
};

struct RewardWeights {
  double w_vel = 50.0;   // reward per meter (per radian for turn)
  double w_energy = 0.5; // penalty per joule
};

enum class EnergyMode { PositiveWork, Signed, Absolute };

struct EnvParams {
  double substep_dt = 0.001;     // s, (0, 2ms]
  double step_duration = 0.25;   // s per half-cycle
  RewardWeights rewards;
  ContactParams contact;
  EnergyMode energy_mode = EnergyMode::PositiveWork;
  double reset_perturbation = 0.01;   // rad, max |dq| applied at reset
  double fall_height_fraction = 0.6;  // of nominal height
  double fall_attitude_rad = 0.6;     // |roll| or |pitch| limit
  Vec3 gravity{0.0, -9.81, 0.0};

  void validate() const;
};

// Full simulation state. World frame: x forward, y up, z right.
struct WorldState {
  Vec3 base_pos = Vec3::Zero();
  Quat base_orientation = Quat::Identity();
  Vec3 base_vel = Vec3::Zero();
  Vec3 base_angvel = Vec3::Zero();  // world frame
  Vec12 q = Vec12::Zero();
  Vec12 qd = Vec12::Zero();
  PhaseState phase;
  double step_energy = 0.0;  // J, accumulated within the current gait step

  bool finite() const;
};

struct ContactPoint {
  Vec3 position_world = Vec3::Zero();
  Vec3 velocity_world = Vec3::Zero();
};

// One integration substep: joints as PD-driven second-order systems, the
// floating base under gravity plus the contact wrench from the feet.
WorldState physics_substep(const WorldState& world, const RobotModel& model,
                           const Vec12& joint_torques,
                           const std::array<ContactPoint, kNumLegs>& feet,
                           const ContactParams& contact, double dt);

double compute_reward(double delta, double energy, const RewardWeights& w);
double accumulate_energy(const Vec12& tau, const Vec12& qd, double dt,
                         EnergyMode mode = EnergyMode::PositiveWork);

// Euler angles of the torso: yaw about world y, pitch/roll of the forward
// and right axes against the horizontal plane.
struct Attitude {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};
Attitude attitude_of(const Quat& q);

struct StepInfo {
  double delta = 0.0;         // displacement along the gait's reward axis
  double delta_energy = 0.0;  // J over the half-step
  Vec3 base_displacement = Vec3::Zero();
  double yaw_delta = 0.0;
  int clamp_events = 0;
  int substeps = 0;
};

struct StepResult {
  JointState state;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// Gait-step MDP over the simplified dynamics: each step_gait tracks the
// spline targets for exactly half a cycle and returns one reward.
class QuadrupedEnv {
 public:
  QuadrupedEnv(RobotModel model, EnvParams params, GaitConfig gait);

  JointState reset(uint64_t seed);
  StepResult step_gait(const ControlPointSet& actions);
  // As step_gait, but with explicit per-leg planes/offsets (gait blending).
  StepResult step_gait(const ControlPointSet& actions,
                       const std::array<GaitPlane, kNumLegs>& planes,
                       const std::array<double, kNumLegs>& offsets);

  const WorldState& world() const { return world_; }
  const RobotModel& model() const { return model_; }
  const EnvParams& params() const { return params_; }
  const GaitConfig& gait() const { return gait_; }
  bool done() const { return done_; }
  int gait_steps_taken() const { return steps_taken_; }

  // Substep-resolution rows of the last step_gait call, for trace export:
  // {t, phi, base xyz, roll pitch yaw, q0..q11}.
  struct TraceRow {
    double t = 0.0;
    double phi = 0.0;
    Vec3 base_pos = Vec3::Zero();
    Attitude attitude;
    Vec12 q = Vec12::Zero();
  };
  const std::vector<TraceRow>& last_trace() const { return trace_; }
  double time() const { return time_; }

 private:
  Vec3 foot_world(int leg) const;

  RobotModel model_;
  EnvParams params_;
  GaitConfig gait_;
  WorldState world_;
  std::array<Vec3, kNumLegs> prev_foot_world_{};
  Vec12 prev_targets_ = Vec12::Zero();
  bool have_prev_targets_ = false;
  bool done_ = false;
  int steps_taken_ = 0;
  double time_ = 0.0;
  std::vector<TraceRow> trace_;
};

// Runs the policy for `gait_steps` steps (or until a fall) and sums the
// rewards. The standard objective wiring for ARS.
double rollout_return(QuadrupedEnv& env, const PolicyMatrix& policy,
                      const RadiusBounds& box, int gait_steps, uint64_t seed);

// The unperturbed standing pose: all feet at mid-range radius under their
// hips.
JointState nominal_stance_state(const RobotModel& model);

}  // namespace gaitforge
