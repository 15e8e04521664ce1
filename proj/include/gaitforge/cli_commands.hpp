#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "gaitforge/config.hpp"

namespace gaitforge::cli {

// Stable exit codes: 0 ok, 2 config error, 3 training abort, 4 fall,
// 5 rank-deficient regression.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTrainingAbort = 3;
constexpr int kExitFall = 4;
constexpr int kExitRankDeficient = 5;

struct CommonOptions {
  std::optional<std::filesystem::path> config_path;
  std::optional<uint64_t> seed;
  std::optional<std::string> gait;
  std::optional<std::filesystem::path> output_dir;
};

struct TrainOptions {
  CommonOptions common;
  std::optional<int> iterations;
  std::optional<int> workers;
};

struct RolloutOptions {
  CommonOptions common;
  std::filesystem::path policy_path;
  int gait_steps = 50;
  std::optional<std::filesystem::path> sim2real_path;
};

struct FitSim2RealOptions {
  CommonOptions common;
  std::filesystem::path trace_path;
};

struct ExportTrajectoryOptions {
  CommonOptions common;
  std::filesystem::path policy_path;
  int resolution = 360;
  std::optional<std::string> state_csv;  // "q0,...,q11"; stance pose if unset
};

struct TransitionOptions {
  CommonOptions common;
  std::filesystem::path policy_path;
  std::string from_gait;
  std::string to_gait;
  double alpha = 0.3;
  int gait_steps = 40;
};

int cmd_train(const TrainOptions& options);
int cmd_rollout(const RolloutOptions& options);
int cmd_fit_sim2real(const FitSim2RealOptions& options);
int cmd_export_trajectory(const ExportTrajectoryOptions& options);
int cmd_transition(const TransitionOptions& options);

// Shared by cmd_transition and the acceptance suite: per-gait-step blended
// parameters of a from->to switch at step `switch_at`.
std::vector<BlendState> transition_blend_schedule(const GaitConfig& from,
                                                  const GaitConfig& to,
                                                  double alpha, int gait_steps,
                                                  int switch_at);

}  // namespace gaitforge::cli
