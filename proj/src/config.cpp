#include "gaitforge/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace gaitforge {

namespace {

std::string where(const std::string& source, const YAML::Node& node) {
  return source + ":" + std::to_string(node.Mark().line + 1);
}

void require_keys(const std::string& source, const YAML::Node& node,
                  const std::set<std::string>& allowed) {
  if (!node.IsMap())
    throw ConfigError(where(source, node) + ": expected a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (allowed.find(key) == allowed.end())
      throw ConfigError(where(source, kv.first) + ": unknown key '" + key +
                        "'");
  }
}

double get_double(const std::string& source, const YAML::Node& node,
                  const std::string& key, double fallback) {
  if (!node[key]) return fallback;
  try {
    return node[key].as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(source, node[key]) + ": '" + key +
                      "' must be a number");
  }
}

int get_int(const std::string& source, const YAML::Node& node,
            const std::string& key, int fallback) {
  if (!node[key]) return fallback;
  try {
    return node[key].as<int>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(source, node[key]) + ": '" + key +
                      "' must be an integer");
  }
}

Vec3 get_vec3(const std::string& source, const YAML::Node& node,
              const std::string& key, const Vec3& fallback) {
  if (!node[key]) return fallback;
  const YAML::Node v = node[key];
  if (!v.IsSequence() || v.size() != 3)
    throw ConfigError(where(source, v) + ": '" + key +
                      "' must be a 3-element list");
  return Vec3{v[0].as<double>(), v[1].as<double>(), v[2].as<double>()};
}

std::array<double, 4> get_vec4(const std::string& source,
                               const YAML::Node& node, const std::string& key,
                               const std::array<double, 4>& fallback) {
  if (!node[key]) return fallback;
  const YAML::Node v = node[key];
  if (!v.IsSequence() || v.size() != 4)
    throw ConfigError(where(source, v) + ": '" + key +
                      "' must be a 4-element list");
  return {v[0].as<double>(), v[1].as<double>(), v[2].as<double>(),
          v[3].as<double>()};
}

void parse_robot(const std::string& source, const YAML::Node& node,
                 RobotModel& robot) {
  require_keys(source, node,
               {"torso_mass", "inertia_diag", "upper_link_length",
                "lower_link_length", "abduction_axis_offset", "hip_half_length",
                "hip_half_width", "joint_limits_lower", "joint_limits_upper",
                "kp", "kd", "torque_cap", "nominal_height", "joint_inertia",
                "joint_viscous", "radius_bounds", "foot_box_min",
                "foot_box_max"});

  robot.torso_mass = get_double(source, node, "torso_mass", robot.torso_mass);
  const Vec3 inertia = get_vec3(source, node, "inertia_diag",
                                robot.torso_inertia.diagonal());
  robot.torso_inertia = inertia.asDiagonal();

  const double upper = get_double(source, node, "upper_link_length",
                                  robot.legs[0].upper_link_length);
  const double lower = get_double(source, node, "lower_link_length",
                                  robot.legs[0].lower_link_length);
  const double abd = get_double(source, node, "abduction_axis_offset",
                                robot.legs[0].abduction_axis_offset);
  const double half_len =
      get_double(source, node, "hip_half_length",
                 std::abs(robot.legs[0].hip_offset.x()));
  const double half_width =
      get_double(source, node, "hip_half_width",
                 std::abs(robot.legs[0].hip_offset.z()));
  for (int leg = 0; leg < kNumLegs; ++leg) {
    robot.legs[leg].upper_link_length = upper;
    robot.legs[leg].lower_link_length = lower;
    robot.legs[leg].abduction_axis_offset = abd;
  }
  robot.legs[0].hip_offset = {half_len, 0.0, -half_width};
  robot.legs[1].hip_offset = {half_len, 0.0, half_width};
  robot.legs[2].hip_offset = {-half_len, 0.0, -half_width};
  robot.legs[3].hip_offset = {-half_len, 0.0, half_width};

  robot.joint_limits.lower = get_vec3(source, node, "joint_limits_lower",
                                      robot.joint_limits.lower);
  robot.joint_limits.upper = get_vec3(source, node, "joint_limits_upper",
                                      robot.joint_limits.upper);
  robot.gains.kp.setConstant(get_double(source, node, "kp", robot.gains.kp[0]));
  robot.gains.kd.setConstant(get_double(source, node, "kd", robot.gains.kd[0]));
  robot.torque_cap = get_double(source, node, "torque_cap", robot.torque_cap);
  robot.nominal_height =
      get_double(source, node, "nominal_height", robot.nominal_height);
  robot.joint_inertia =
      get_double(source, node, "joint_inertia", robot.joint_inertia);
  robot.joint_viscous =
      get_double(source, node, "joint_viscous", robot.joint_viscous);

  if (node["radius_bounds"]) {
    const YAML::Node v = node["radius_bounds"];
    if (!v.IsSequence() || v.size() != 2)
      throw ConfigError(where(source, v) +
                        ": 'radius_bounds' must be [w_min, w_max]");
    robot.radius_bounds.w_min = v[0].as<double>();
    robot.radius_bounds.w_max = v[1].as<double>();
  }
  robot.foot_box.min =
      get_vec3(source, node, "foot_box_min", robot.foot_box.min);
  robot.foot_box.max =
      get_vec3(source, node, "foot_box_max", robot.foot_box.max);
}

void parse_ars(const std::string& source, const YAML::Node& node,
               ArsOverrides& ars) {
  require_keys(source, node,
               {"beta", "nu", "directions", "top_directions", "iterations",
                "workers", "episode_gait_steps", "checkpoint_every"});
  if (node["beta"]) ars.beta = get_double(source, node, "beta", 0.0);
  if (node["nu"]) ars.nu = get_double(source, node, "nu", 0.0);
  if (node["directions"])
    ars.directions = get_int(source, node, "directions", 0);
  if (node["top_directions"])
    ars.top_directions = get_int(source, node, "top_directions", 0);
  if (node["iterations"]) ars.iterations = get_int(source, node, "iterations", 0);
  if (node["workers"]) ars.workers = get_int(source, node, "workers", 0);
  if (node["episode_gait_steps"])
    ars.episode_gait_steps = get_int(source, node, "episode_gait_steps", 0);
  if (node["checkpoint_every"])
    ars.checkpoint_every = get_int(source, node, "checkpoint_every", 0);
}

void parse_env(const std::string& source, const YAML::Node& node,
               EnvParams& env) {
  require_keys(source, node,
               {"substep_dt", "step_duration", "w_vel", "w_energy",
                "energy_mode", "contact_stiffness", "contact_damping",
                "friction", "ground_height", "reset_perturbation",
                "fall_height_fraction", "fall_attitude_rad", "gravity"});
  env.substep_dt = get_double(source, node, "substep_dt", env.substep_dt);
  env.step_duration =
      get_double(source, node, "step_duration", env.step_duration);
  env.rewards.w_vel = get_double(source, node, "w_vel", env.rewards.w_vel);
  env.rewards.w_energy =
      get_double(source, node, "w_energy", env.rewards.w_energy);
  if (node["energy_mode"]) {
    const std::string mode = node["energy_mode"].as<std::string>();
    if (mode == "positive_work") env.energy_mode = EnergyMode::PositiveWork;
    else if (mode == "signed") env.energy_mode = EnergyMode::Signed;
    else if (mode == "absolute") env.energy_mode = EnergyMode::Absolute;
    else
      throw ConfigError(where(source, node["energy_mode"]) +
                        ": energy_mode must be positive_work|signed|absolute");
  }
  env.contact.stiffness =
      get_double(source, node, "contact_stiffness", env.contact.stiffness);
  env.contact.damping =
      get_double(source, node, "contact_damping", env.contact.damping);
  env.contact.friction = get_double(source, node, "friction",
                                    env.contact.friction);
  env.contact.ground_height =
      get_double(source, node, "ground_height", env.contact.ground_height);
  env.reset_perturbation = get_double(source, node, "reset_perturbation",
                                      env.reset_perturbation);
  env.fall_height_fraction = get_double(source, node, "fall_height_fraction",
                                        env.fall_height_fraction);
  env.fall_attitude_rad = get_double(source, node, "fall_attitude_rad",
                                     env.fall_attitude_rad);
  env.gravity = get_vec3(source, node, "gravity", env.gravity);
}

void parse_gait_overrides(const std::string& source, const YAML::Node& node,
                          GaitLibrary& lib) {
  if (!node.IsMap())
    throw ConfigError(where(source, node) +
                      ": gait_overrides must be a mapping");
  for (const auto& kv : node) {
    const std::string name = kv.first.as<std::string>();
    GaitConfig gait = lib.get(name);  // throws UnknownGaitError
    const YAML::Node body = kv.second;
    require_keys(source, body, {"plane_yaws", "phase_offsets", "reward_axis"});
    if (body["plane_yaws"]) {
      const auto yaws = get_vec4(source, body, "plane_yaws", {});
      for (int leg = 0; leg < kNumLegs; ++leg)
        gait.leg_planes[leg] = GaitPlane::yawed(yaws[leg]);
    }
    gait.phase_offsets =
        get_vec4(source, body, "phase_offsets", gait.phase_offsets);
    if (body["reward_axis"])
      gait.reward_axis =
          reward_axis_from_string(body["reward_axis"].as<std::string>());
    lib.set(gait.name, gait);
  }
}

void parse_multi_gait(const std::string& source, const YAML::Node& node,
                      RunConfig& config) {
  if (!node.IsSequence())
    throw ConfigError(where(source, node) + ": multi_gait must be a list");
  MultiGaitSpec spec;
  for (const auto& entry : node) {
    require_keys(source, entry, {"gait", "weight"});
    if (!entry["gait"])
      throw ConfigError(where(source, entry) + ": multi_gait entry needs 'gait'");
    const GaitConfig gait =
        config.gaits.get(entry["gait"].as<std::string>());
    const double weight = get_double(source, entry, "weight", 1.0);
    spec.entries.emplace_back(gait, weight);
  }
  spec.validate();
  config.multi_gait = spec;
}

}  // namespace

ArsConfig ArsOverrides::resolve(GaitName gait, uint64_t seed) const {
  ArsConfig config = default_ars_config(gait);
  config.seed = seed;
  if (beta) config.step_size_beta = *beta;
  if (nu) config.noise_nu = *nu;
  if (directions) config.num_directions = *directions;
  if (top_directions) config.top_directions = *top_directions;
  if (iterations) config.iterations = *iterations;
  if (workers) config.workers = *workers;
  if (episode_gait_steps) config.episode_gait_steps = *episode_gait_steps;
  if (checkpoint_every) config.checkpoint_every = *checkpoint_every;
  config.validate();
  return config;
}

RunConfig default_run_config() { return RunConfig{}; }

RunConfig parse_run_config(const std::string& yaml_text,
                           const std::string& source_name) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source_name + ":" + std::to_string(e.mark.line + 1) +
                      ": " + e.msg);
  }
  if (root.IsNull()) return default_run_config();

  RunConfig config;
  require_keys(source_name, root,
               {"seed", "output_dir", "gait", "multi_gait", "robot", "ars",
                "env", "gait_overrides"});

  if (root["seed"]) {
    try {
      config.seed = root["seed"].as<uint64_t>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(source_name, root["seed"]) +
                        ": 'seed' must be a nonnegative integer");
    }
  }
  if (root["output_dir"])
    config.output_dir = root["output_dir"].as<std::string>();
  if (root["robot"]) parse_robot(source_name, root["robot"], config.robot);
  if (root["ars"]) parse_ars(source_name, root["ars"], config.ars);
  if (root["env"]) parse_env(source_name, root["env"], config.env);
  if (root["gait_overrides"])
    parse_gait_overrides(source_name, root["gait_overrides"], config.gaits);
  if (root["gait"]) {
    config.gait = root["gait"].as<std::string>();
    gait_from_string(config.gait);  // validates the name
  }
  if (root["multi_gait"])
    parse_multi_gait(source_name, root["multi_gait"], config);

  config.robot.validate();
  config.env.validate();
  config.resolved_ars();  // validates the ars section
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), path.string());
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace gaitforge
