#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "gaitforge/trajectory.hpp"
#include "gaitforge/types.hpp"

namespace gaitforge {

// The linear policy: one matrix mapping the 12 motor angles to the radial
// way-points, applied once per gait step.
class PolicyMatrix {
 public:
  explicit PolicyMatrix(Eigen::MatrixXd m);
  static PolicyMatrix zeros(int action_dim = kDefaultControlPoints);

  int action_dim() const { return static_cast<int>(m_.rows()); }
  int state_dim() const { return static_cast<int>(m_.cols()); }
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

Eigen::VectorXd act_unclamped(const PolicyMatrix& policy, const JointState& s);
ControlPointSet act(const PolicyMatrix& policy, const JointState& s,
                    const RadiusBounds& box);

// Affine state correction fitted against hardware traces: the policy sees
// M_hat * s_real + b_bar instead of the raw reading.
struct Sim2RealMap {
  Eigen::Matrix<double, 12, 12> m_hat =
      Eigen::Matrix<double, 12, 12>::Identity();
  Vec12 b_bar = Vec12::Zero();
};

ControlPointSet act_corrected(const PolicyMatrix& policy,
                              const Sim2RealMap& map, const JointState& s_real,
                              const RadiusBounds& box);

// Paired joint-angle recordings sampled at one rate, with per-sample
// regression weights (heavier where tracking is known to be poor).
struct StateTracePair {
  std::vector<Vec12> sim_states;
  std::vector<Vec12> real_states;
  Eigen::VectorXd sample_weights;

  void validate() const;
  int size() const { return static_cast<int>(sim_states.size()); }
};

// Default stance/swing weighting used when synthesizing traces: stance is
// the half of the loop where the foot is below the polar center.
double stance_weight(double leg_phase, double w_stance = 3.0,
                     double w_swing = 1.0);

struct Sim2RealFit {
  Sim2RealMap map;
  Vec12 residual_rms = Vec12::Zero();  // radians, per joint
  double condition_number = 0.0;       // of m_hat
};

// Weighted least squares of sim = M_hat * real + b_bar, solved row-wise by
// normal equations with a small ridge. Throws RankDeficientError when the
// weighted design matrix is singular.
Sim2RealFit fit_sim2real(const StateTracePair& trace);

struct PolicyBundle {
  int version = 1;
  PolicyMatrix policy = PolicyMatrix::zeros();
  std::optional<Sim2RealMap> sim2real;
  RadiusBounds box;
  std::string gait = "forward_trot";
  uint64_t seed = 0;
};

void save_policy(const PolicyBundle& bundle, const std::filesystem::path& path);
PolicyBundle load_policy(const std::filesystem::path& path);

void save_sim2real(const Sim2RealFit& fit, const std::filesystem::path& path);
Sim2RealMap load_sim2real(const std::filesystem::path& path);

}  // namespace gaitforge
