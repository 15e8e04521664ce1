#include "gaitforge/ars.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "gaitforge/log.hpp"
#include "gaitforge/rng.hpp"

namespace gaitforge {

void ArsConfig::validate() const {
  if (!(step_size_beta > 0.0)) throw ConfigError("ars: beta must be > 0");
  if (!(noise_nu > 0.0)) throw ConfigError("ars: nu must be > 0");
  if (num_directions < 1) throw ConfigError("ars: N must be >= 1");
  if (top_directions < 1 || top_directions > num_directions)
    throw ConfigError("ars: b must be in [1, N]");
  if (iterations < 1) throw ConfigError("ars: iterations must be >= 1");
  if (workers < 1) throw ConfigError("ars: workers must be >= 1");
  if (episode_gait_steps < 0)
    throw ConfigError("ars: episode_gait_steps must be >= 0");
}

ArsConfig default_ars_config(GaitName gait) {
  ArsConfig c;
  switch (gait) {
    case GaitName::ForwardTrot:
      c.step_size_beta = 0.09;
      c.noise_nu = 0.03;
      break;
    case GaitName::BackwardTrot:
    case GaitName::SideStep:
      c.step_size_beta = 0.1;
      c.noise_nu = 0.03;
      break;
    case GaitName::Turn:
      c.step_size_beta = 0.1;
      c.noise_nu = 0.05;
      break;
  }
  return c;
}

DirectionBatch sample_directions(const ArsConfig& config, uint64_t iteration,
                                 int rows, int cols) {
  DirectionBatch batch;
  batch.deltas.reserve(config.num_directions);
  for (int i = 0; i < config.num_directions; ++i) {
    RandomStream rng(mix_seed(config.seed, 0xd1 + iteration * 2ULL,
                              static_cast<uint64_t>(i)));
    Eigen::MatrixXd delta(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) delta(r, c) = rng.gaussian();
    batch.deltas.push_back(std::move(delta));
  }
  return batch;
}

uint64_t rollout_seed(uint64_t master_seed, uint64_t iteration,
                      uint64_t direction) {
  return mix_seed(master_seed, 0xe0 + iteration * 2ULL, direction);
}

uint64_t eval_rollout_seed(uint64_t master_seed, uint64_t iteration) {
  return mix_seed(master_seed, 0xe1 + iteration * 2ULL, 0xffffffffULL);
}

std::pair<double, double> evaluate_pair(const Eigen::MatrixXd& theta,
                                        const Eigen::MatrixXd& delta,
                                        double nu,
                                        const RolloutObjective& objective,
                                        uint64_t seed) {
  const double r_plus = objective(theta + nu * delta, seed);
  const double r_minus = objective(theta - nu * delta, seed);
  return {r_plus, r_minus};
}

std::vector<int> select_top(
    const std::vector<std::pair<double, double>>& returns, int b) {
  const int n = static_cast<int>(returns.size());
  if (b < 1 || b > n) throw std::invalid_argument("select_top: bad b");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
    return std::max(returns[a].first, returns[a].second) >
           std::max(returns[c].first, returns[c].second);
  });
  order.resize(b);
  return order;
}

UpdateResult ars_update(const Eigen::MatrixXd& theta,
                        const std::vector<std::pair<double, double>>& returns,
                        const DirectionBatch& directions,
                        const std::vector<int>& selected,
                        const ArsConfig& config) {
  if (selected.empty())
    throw std::invalid_argument("ars_update: empty selection");

  const int b = static_cast<int>(selected.size());

  // Population standard deviation over the 2b returns entering the update.
  double sum = 0.0;
  for (const int i : selected) sum += returns[i].first + returns[i].second;
  const double mean = sum / (2.0 * b);
  double var = 0.0;
  for (const int i : selected) {
    var += (returns[i].first - mean) * (returns[i].first - mean);
    var += (returns[i].second - mean) * (returns[i].second - mean);
  }
  var /= 2.0 * b;
  const double sigma_r = std::sqrt(var);

  UpdateResult result{theta, sigma_r, false};
  if (sigma_r < kDegenerateSigma) {
    result.degenerate = true;
    log_warn("ars: degenerate sigma_R, update skipped");
    return result;
  }

  Eigen::MatrixXd step = Eigen::MatrixXd::Zero(theta.rows(), theta.cols());
  for (const int i : selected)
    step.noalias() +=
        (returns[i].first - returns[i].second) * directions.deltas[i];
  result.theta = theta + (config.step_size_beta / (b * sigma_r)) * step;
  return result;
}

namespace {

// Runs tasks [0, count) on `workers` threads; results land in caller-owned
// slots keyed by task index, so scheduling cannot affect the outcome.
void run_indexed(int count, int workers,
                 const std::function<void(int)>& task) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int n_threads = std::min(workers, count);
  pool.reserve(n_threads);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

TrainResult train(const RolloutObjective& objective, const ArsConfig& config,
                  Eigen::MatrixXd theta0, const CheckpointFn& checkpoint) {
  config.validate();
  const int n = config.num_directions;

  TrainResult result;
  result.theta = std::move(theta0);
  result.history.reserve(config.iterations);

  int degenerate_streak = 0;
  for (int iter = 0; iter < config.iterations; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();

    const DirectionBatch batch =
        sample_directions(config, iter, static_cast<int>(result.theta.rows()),
                          static_cast<int>(result.theta.cols()));

    std::vector<std::pair<double, double>> returns(n);
    run_indexed(n, config.workers, [&](int i) {
      returns[i] =
          evaluate_pair(result.theta, batch.deltas[i], config.noise_nu,
                        objective, rollout_seed(config.seed, iter, i));
    });

    const std::vector<int> selected = select_top(returns, config.top_directions);
    const UpdateResult update =
        ars_update(result.theta, returns, batch, selected, config);
    result.theta = update.theta;

    if (update.degenerate) {
      ++degenerate_streak;
      if (degenerate_streak >= 3)
        throw TrainingAborted(
            "3 consecutive degenerate-sigma iterations at iteration " +
            std::to_string(iter));
    } else {
      degenerate_streak = 0;
    }

    const double eval_return =
        objective(result.theta, eval_rollout_seed(config.seed, iter));

    IterationRecord rec;
    rec.iteration = iter;
    double sum = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [rp, rm] : returns) {
      sum += rp + rm;
      best = std::max(best, std::max(rp, rm));
    }
    rec.mean_return = sum / (2.0 * n);
    rec.max_return = best;
    rec.sigma_r = update.sigma_r;
    rec.eval_return = eval_return;
    rec.wall_s = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    result.history.push_back(rec);

    if (checkpoint && config.checkpoint_every > 0 &&
        (iter + 1) % config.checkpoint_every == 0)
      checkpoint(iter, result.theta);
  }
  return result;
}

}  // namespace gaitforge
