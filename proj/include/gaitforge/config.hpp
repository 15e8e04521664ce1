#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "gaitforge/ars.hpp"
#include "gaitforge/env.hpp"
#include "gaitforge/gaits.hpp"

namespace gaitforge {

// ARS fields the config file set explicitly; anything absent falls back to
// the per-gait preset once the gait is known.
struct ArsOverrides {
  std::optional<double> beta;
  std::optional<double> nu;
  std::optional<int> directions;
  std::optional<int> top_directions;
  std::optional<int> iterations;
  std::optional<int> workers;
  std::optional<int> episode_gait_steps;
  std::optional<int> checkpoint_every;

  ArsConfig resolve(GaitName gait, uint64_t seed) const;
};

// One document fully specifying a run. Unknown keys are rejected with the
// offending line so typos cannot silently fall back to defaults.
struct RunConfig {
  RobotModel robot = RobotModel::defaults();
  EnvParams env;
  ArsOverrides ars;
  GaitLibrary gaits = GaitLibrary::defaults();
  std::string gait = "forward_trot";
  std::optional<MultiGaitSpec> multi_gait;
  std::filesystem::path output_dir = "out";
  uint64_t seed = 0;

  ArsConfig resolved_ars() const {
    return ars.resolve(gait_from_string(gait), seed);
  }
};

RunConfig default_run_config();

// Throws ConfigError (with file:line anchors) on parse errors, unknown
// keys, or invalid values.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& yaml_text,
                           const std::string& source_name = "<inline>");

// FNV-1a over the raw config bytes, for run manifests.
uint64_t fnv1a64(const std::string& bytes);

}  // namespace gaitforge
