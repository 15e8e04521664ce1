#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gaitforge/gaits.hpp"
#include "gaitforge/types.hpp"

namespace gaitforge {

// Augmented Random Search, version V-1t: antithetic Gaussian directions,
// top-b selection by max return, update scaled by the return standard
// deviation. No state or action normalization anywhere.
struct ArsConfig {
  double step_size_beta = 0.09;
  double noise_nu = 0.03;
  int num_directions = 16;  // N; the original formulation uses dim(theta)
  int top_directions = 8;   // b <= N
  int iterations = 40;
  uint64_t seed = 0;
  int workers = 1;
  int episode_gait_steps = 20;
  int checkpoint_every = 0;  // 0 disables intermediate checkpoints

  void validate() const;
};

// Step-size/noise presets per gait (the published hyperparameters).
ArsConfig default_ars_config(GaitName gait);

struct DirectionBatch {
  std::vector<Eigen::MatrixXd> deltas;
};

// N i.i.d. standard-normal matrices; a pure function of (seed, iteration).
DirectionBatch sample_directions(const ArsConfig& config, uint64_t iteration,
                                 int rows, int cols);

// Scores one parameter point; the seed pins every stochastic choice the
// evaluation makes (environment resets, in particular).
using RolloutObjective =
    std::function<double(const Eigen::MatrixXd& theta, uint64_t rollout_seed)>;

// Deterministic env seed shared by the +nu and -nu rollouts of direction i.
uint64_t rollout_seed(uint64_t master_seed, uint64_t iteration,
                      uint64_t direction);
uint64_t eval_rollout_seed(uint64_t master_seed, uint64_t iteration);

std::pair<double, double> evaluate_pair(const Eigen::MatrixXd& theta,
                                        const Eigen::MatrixXd& delta,
                                        double nu,
                                        const RolloutObjective& objective,
                                        uint64_t seed);

// Indices of the b directions with the largest max(R+, R-), descending,
// ties broken toward the lower index.
std::vector<int> select_top(
    const std::vector<std::pair<double, double>>& returns, int b);

struct UpdateResult {
  Eigen::MatrixXd theta;
  double sigma_r = 0.0;
  bool degenerate = false;  // sigma below threshold; update skipped
};

constexpr double kDegenerateSigma = 1e-12;

UpdateResult ars_update(const Eigen::MatrixXd& theta,
                        const std::vector<std::pair<double, double>>& returns,
                        const DirectionBatch& directions,
                        const std::vector<int>& selected,
                        const ArsConfig& config);

struct IterationRecord {
  int iteration = 0;
  double mean_return = 0.0;  // over the 2N perturbed rollouts
  double max_return = 0.0;
  double sigma_r = 0.0;
  double eval_return = 0.0;  // unperturbed policy
  double wall_s = 0.0;
};

struct TrainResult {
  Eigen::MatrixXd theta;
  std::vector<IterationRecord> history;
};

using CheckpointFn = std::function<void(int iteration,
                                        const Eigen::MatrixXd& theta)>;

// Full loop. Bit-reproducible for a given (seed, config) regardless of the
// worker count; aborts (TrainingAborted) after 3 consecutive degenerate-
// sigma iterations.
TrainResult train(const RolloutObjective& objective, const ArsConfig& config,
                  Eigen::MatrixXd theta0, const CheckpointFn& checkpoint = {});

}  // namespace gaitforge
