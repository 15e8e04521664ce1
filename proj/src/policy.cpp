#include "gaitforge/policy.hpp"

#include <Eigen/Dense>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "gaitforge/log.hpp"

namespace gaitforge {

using nlohmann::json;

PolicyMatrix::PolicyMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.cols() != kStateDim)
    throw DimensionMismatch("policy matrix must have 12 columns, got " +
                            std::to_string(m_.cols()));
  if (m_.rows() < kMinControlPoints || m_.rows() > kMaxControlPoints)
    throw DimensionMismatch("policy matrix rows outside control point range");
  if (!m_.allFinite())
    throw std::invalid_argument("policy matrix has non-finite entries");
}

PolicyMatrix PolicyMatrix::zeros(int action_dim) {
  return PolicyMatrix(Eigen::MatrixXd::Zero(action_dim, kStateDim));
}

Eigen::VectorXd act_unclamped(const PolicyMatrix& policy,
                              const JointState& s) {
  return policy.matrix() * s.angles;
}

ControlPointSet act(const PolicyMatrix& policy, const JointState& s,
                    const RadiusBounds& box) {
  Eigen::VectorXd radii = act_unclamped(policy, s);
  for (int i = 0; i < radii.size(); ++i) radii[i] = box.clamp(radii[i]);
  return ControlPointSet(std::move(radii), box);
}

ControlPointSet act_corrected(const PolicyMatrix& policy,
                              const Sim2RealMap& map, const JointState& s_real,
                              const RadiusBounds& box) {
  const Vec12 corrected = map.m_hat * s_real.angles + map.b_bar;
  return act(policy, JointState(corrected), box);
}

void StateTracePair::validate() const {
  if (sim_states.size() != real_states.size())
    throw DimensionMismatch("trace pair length mismatch");
  if (static_cast<std::size_t>(sample_weights.size()) != sim_states.size())
    throw DimensionMismatch("trace weights length mismatch");
  if ((sample_weights.array() < 0.0).any())
    throw std::invalid_argument("trace weights must be nonnegative");
  if (!(sample_weights.sum() > 0.0))
    throw std::invalid_argument("trace weights must have positive sum");
}

double stance_weight(double leg_phase, double w_stance, double w_swing) {
  return std::cos(wrap_two_pi(leg_phase)) > 0.0 ? w_stance : w_swing;
}

Sim2RealFit fit_sim2real(const StateTracePair& trace) {
  trace.validate();
  const int n = trace.size();
  constexpr int kAug = kStateDim + 1;  // 12 coefficients + offset per row
  if (n < kAug)
    throw RankDeficientError("need at least 13 samples, got " +
                             std::to_string(n));

  // Shared weighted Gram matrix over augmented regressors [real; 1].
  Eigen::Matrix<double, kAug, kAug> gram;
  gram.setZero();
  Eigen::Matrix<double, kAug, kStateDim> rhs;
  rhs.setZero();
  for (int k = 0; k < n; ++k) {
    Eigen::Matrix<double, kAug, 1> x;
    x.head<kStateDim>() = trace.real_states[k];
    x[kStateDim] = 1.0;
    const double w = trace.sample_weights[k];
    gram.noalias() += w * x * x.transpose();
    rhs.noalias() += w * x * trace.sim_states[k].transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, kAug, kAug>> eig(gram);
  const double lam_max = eig.eigenvalues().maxCoeff();
  const double lam_min = eig.eigenvalues().minCoeff();
  if (!(lam_max > 0.0) || lam_min < 1e-10 * lam_max)
    throw RankDeficientError("weighted design matrix is rank deficient");

  const Eigen::Matrix<double, kAug, kAug> reg =
      gram + 1e-10 * Eigen::Matrix<double, kAug, kAug>::Identity();
  const Eigen::Matrix<double, kAug, kStateDim> beta = reg.ldlt().solve(rhs);

  Sim2RealFit fit;
  fit.map.m_hat = beta.topRows<kStateDim>().transpose();
  fit.map.b_bar = beta.row(kStateDim).transpose();

  Vec12 sq_err = Vec12::Zero();
  double w_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec12 pred =
        fit.map.m_hat * trace.real_states[k] + fit.map.b_bar;
    const Vec12 err = pred - trace.sim_states[k];
    sq_err += trace.sample_weights[k] * err.cwiseProduct(err);
    w_sum += trace.sample_weights[k];
  }
  fit.residual_rms = (sq_err / w_sum).cwiseSqrt();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(fit.map.m_hat);
  const double smin = svd.singularValues().minCoeff();
  fit.condition_number =
      smin > 0.0 ? svd.singularValues().maxCoeff() / smin
                 : std::numeric_limits<double>::infinity();
  if (fit.condition_number > 1e6)
    log_warn("sim2real map badly conditioned: cond = " +
             std::to_string(fit.condition_number));
  return fit;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, int rows, int cols,
                                 const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw DimensionMismatch(what + ": expected " + std::to_string(rows) +
                            " rows");
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw DimensionMismatch(what + ": expected " + std::to_string(cols) +
                              " columns in row " + std::to_string(r));
    for (int c = 0; c < cols; ++c) {
      if (!row[c].is_number())
        throw FormatError(what + ": non-numeric entry");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace

void save_policy(const PolicyBundle& bundle,
                 const std::filesystem::path& path) {
  json j;
  j["version"] = bundle.version;
  j["state_dim"] = bundle.policy.state_dim();
  j["action_dim"] = bundle.policy.action_dim();
  j["M"] = matrix_to_json(bundle.policy.matrix());
  if (bundle.sim2real.has_value()) {
    j["M_hat"] = matrix_to_json(bundle.sim2real->m_hat);
    json b = json::array();
    for (int i = 0; i < kStateDim; ++i) b.push_back(bundle.sim2real->b_bar[i]);
    j["b_bar"] = std::move(b);
  } else {
    j["M_hat"] = nullptr;
    j["b_bar"] = nullptr;
  }
  j["box"] = {{"w_min", bundle.box.w_min}, {"w_max", bundle.box.w_max}};
  j["gait"] = bundle.gait;
  j["seed"] = bundle.seed;

  std::ofstream out(path);
  if (!out) throw FormatError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

PolicyBundle load_policy(const std::filesystem::path& path) {
  const json j = load_json_file(path);
  try {
    PolicyBundle bundle;
    bundle.version = j.at("version").get<int>();
    const int state_dim = j.at("state_dim").get<int>();
    const int action_dim = j.at("action_dim").get<int>();
    if (state_dim != kStateDim)
      throw DimensionMismatch("unsupported state_dim " +
                              std::to_string(state_dim));
    bundle.policy = PolicyMatrix(
        matrix_from_json(j.at("M"), action_dim, state_dim, "M"));
    if (!j.at("M_hat").is_null() || !j.at("b_bar").is_null()) {
      Sim2RealMap map;
      map.m_hat =
          matrix_from_json(j.at("M_hat"), kStateDim, kStateDim, "M_hat");
      const json& b = j.at("b_bar");
      if (!b.is_array() || static_cast<int>(b.size()) != kStateDim)
        throw DimensionMismatch("b_bar: expected 12 entries");
      for (int i = 0; i < kStateDim; ++i) map.b_bar[i] = b[i].get<double>();
      bundle.sim2real = map;
    }
    bundle.box.w_min = j.at("box").at("w_min").get<double>();
    bundle.box.w_max = j.at("box").at("w_max").get<double>();
    bundle.gait = j.at("gait").get<std::string>();
    bundle.seed = j.at("seed").get<uint64_t>();
    return bundle;
  } catch (const DimensionMismatch&) {
    throw;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_sim2real(const Sim2RealFit& fit, const std::filesystem::path& path) {
  json j;
  j["version"] = 1;
  j["M_hat"] = matrix_to_json(fit.map.m_hat);
  json b = json::array();
  for (int i = 0; i < kStateDim; ++i) b.push_back(fit.map.b_bar[i]);
  j["b_bar"] = std::move(b);
  json rms = json::array();
  for (int i = 0; i < kStateDim; ++i) rms.push_back(fit.residual_rms[i]);
  j["residual_rms"] = std::move(rms);
  j["condition_number"] = fit.condition_number;

  std::ofstream out(path);
  if (!out) throw FormatError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

Sim2RealMap load_sim2real(const std::filesystem::path& path) {
  const json j = load_json_file(path);
  try {
    Sim2RealMap map;
    map.m_hat = matrix_from_json(j.at("M_hat"), kStateDim, kStateDim, "M_hat");
    const json& b = j.at("b_bar");
    if (!b.is_array() || static_cast<int>(b.size()) != kStateDim)
      throw DimensionMismatch("b_bar: expected 12 entries");
    for (int i = 0; i < kStateDim; ++i) map.b_bar[i] = b[i].get<double>();
    return map;
  } catch (const DimensionMismatch&) {
    throw;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace gaitforge
