#include "gaitforge/cli_commands.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gaitforge/ars.hpp"
#include "gaitforge/csv.hpp"
#include "gaitforge/env.hpp"
#include "gaitforge/log.hpp"
#include "gaitforge/policy.hpp"
#include "gaitforge/version.hpp"

namespace gaitforge::cli {

namespace {

using nlohmann::json;

struct LoadedConfig {
  RunConfig config;
  std::string config_hash = "none";
  std::string config_path = "";
};

LoadedConfig load_config(const CommonOptions& common) {
  LoadedConfig loaded;
  if (common.config_path) {
    std::ifstream in(*common.config_path);
    if (!in)
      throw ConfigError("cannot open config: " + common.config_path->string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    loaded.config =
        parse_run_config(buffer.str(), common.config_path->string());
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016" PRIx64, fnv1a64(buffer.str()));
    loaded.config_hash = hex;
    loaded.config_path = common.config_path->string();
  } else {
    loaded.config = default_run_config();
  }
  if (common.seed) loaded.config.seed = *common.seed;
  if (common.gait) {
    gait_from_string(*common.gait);  // validates
    loaded.config.gait = *common.gait;
  }
  if (common.output_dir) loaded.config.output_dir = *common.output_dir;
  std::filesystem::create_directories(loaded.config.output_dir);
  return loaded;
}

void write_manifest(const LoadedConfig& loaded, const std::string& command,
                    const json& params,
                    const std::vector<std::string>& outputs) {
  json j;
  j["app"] = "gaitforge";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = loaded.config.seed;
  j["config_path"] = loaded.config_path;
  j["config_hash"] = loaded.config_hash;
  j["params"] = params;
  j["outputs"] = outputs;
  std::ofstream out(loaded.config.output_dir / "manifest.json");
  out << j.dump(2) << '\n';
}

RolloutObjective make_objective(const RunConfig& config,
                                const ArsConfig& ars) {
  const RobotModel robot = config.robot;
  const EnvParams env_params = config.env;
  const RadiusBounds box = config.robot.radius_bounds;
  const int steps = ars.episode_gait_steps;

  if (config.multi_gait) {
    const MultiGaitSpec spec = *config.multi_gait;
    return [=](const Eigen::MatrixXd& theta, uint64_t seed) {
      const PolicyMatrix policy(theta);
      return multi_gait_return(
          spec,
          [&](const GaitConfig& gait, uint64_t episode_seed) {
            QuadrupedEnv env(robot, env_params, gait);
            return rollout_return(env, policy, box, steps, episode_seed);
          },
          seed);
    };
  }

  const GaitConfig gait = config.gaits.get(config.gait);
  return [=](const Eigen::MatrixXd& theta, uint64_t seed) {
    QuadrupedEnv env(robot, env_params, gait);
    return rollout_return(env, PolicyMatrix(theta), box, steps, seed);
  };
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const TrainingAborted& e) {
    std::fprintf(stderr, "error: training aborted: %s\n", e.what());
    return kExitTrainingAbort;
  } catch (const RankDeficientError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRankDeficient;
  } catch (const EpisodeDiverged& e) {
    std::fprintf(stderr, "error: simulation diverged: %s\n", e.what());
    return kExitFall;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}

const std::vector<std::string> kTraceHeader = {
    "t_s",  "phase", "base_x", "base_y", "base_z", "roll", "pitch",
    "yaw",  "q0",    "q1",     "q2",     "q3",     "q4",   "q5",
    "q6",   "q7",    "q8",     "q9",     "q10",    "q11",
    "gait_step", "step_boundary", "step_reward"};

void append_step_trace(CsvWriter& writer, const QuadrupedEnv& env,
                       int gait_step, double step_reward,
                       const std::vector<double>& extra = {}) {
  const auto& rows = env.last_trace();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool boundary = i + 1 == rows.size();
    std::vector<double> row = {r.t,
                               r.phi,
                               r.base_pos.x(),
                               r.base_pos.y(),
                               r.base_pos.z(),
                               r.attitude.roll,
                               r.attitude.pitch,
                               r.attitude.yaw};
    for (int j = 0; j < kStateDim; ++j) row.push_back(r.q[j]);
    row.push_back(static_cast<double>(gait_step));
    row.push_back(boundary ? 1.0 : 0.0);
    row.push_back(boundary ? step_reward : 0.0);
    row.insert(row.end(), extra.begin(), extra.end());
    writer.write_row(row);
  }
}

std::vector<std::string> action_header(int action_dim) {
  std::vector<std::string> h = {"gait_step"};
  for (int i = 0; i < action_dim; ++i) h.push_back("a" + std::to_string(i));
  return h;
}

}  // namespace

int cmd_train(const TrainOptions& options) {
  return run_guarded([&]() {
    const LoadedConfig loaded = load_config(options.common);
    const RunConfig& config = loaded.config;

    ArsConfig ars = config.resolved_ars();
    if (options.iterations) ars.iterations = *options.iterations;
    if (options.workers) ars.workers = *options.workers;
    ars.validate();

    const RolloutObjective objective = make_objective(config, ars);
    const Eigen::MatrixXd theta0 =
        Eigen::MatrixXd::Zero(kDefaultControlPoints, kStateDim);

    const auto checkpoint = [&](int iteration, const Eigen::MatrixXd& theta) {
      PolicyBundle bundle;
      bundle.policy = PolicyMatrix(theta);
      bundle.box = config.robot.radius_bounds;
      bundle.gait = config.gait;
      bundle.seed = config.seed;
      char name[48];
      std::snprintf(name, sizeof(name), "policy_iter_%04d.json", iteration + 1);
      save_policy(bundle, config.output_dir / name);
    };

    log_info("training gait '" + config.gait + "' for " +
             std::to_string(ars.iterations) + " iterations");
    const TrainResult result = train(objective, ars, theta0, checkpoint);

    PolicyBundle bundle;
    bundle.policy = PolicyMatrix(result.theta);
    bundle.box = config.robot.radius_bounds;
    bundle.gait = config.gait;
    bundle.seed = config.seed;
    save_policy(bundle, config.output_dir / "policy.json");

    CsvWriter curve(config.output_dir / "curve.csv",
                    {"iteration", "mean_return", "max_return", "sigma_R",
                     "eval_return", "wall_s"});
    for (const auto& rec : result.history)
      curve.write_row({static_cast<double>(rec.iteration), rec.mean_return,
                       rec.max_return, rec.sigma_r, rec.eval_return,
                       rec.wall_s});
    curve.close();

    write_manifest(loaded, "train",
                   {{"gait", config.gait},
                    {"iterations", ars.iterations},
                    {"directions", ars.num_directions},
                    {"top_directions", ars.top_directions},
                    {"beta", ars.step_size_beta},
                    {"nu", ars.noise_nu},
                    {"workers", ars.workers},
                    {"episode_gait_steps", ars.episode_gait_steps}},
                   {"policy.json", "curve.csv"});
    return kExitOk;
  });
}

int cmd_rollout(const RolloutOptions& options) {
  return run_guarded([&]() {
    const LoadedConfig loaded = load_config(options.common);
    const RunConfig& config = loaded.config;
    if (options.gait_steps < 0)
      throw ConfigError("rollout: steps must be nonnegative");

    const PolicyBundle bundle = load_policy(options.policy_path);
    const std::string gait_name =
        options.common.gait ? *options.common.gait : bundle.gait;
    const GaitConfig gait = config.gaits.get(gait_name);

    std::optional<Sim2RealMap> map = bundle.sim2real;
    if (options.sim2real_path) map = load_sim2real(*options.sim2real_path);

    QuadrupedEnv env(config.robot, config.env, gait);
    CsvWriter trace(config.output_dir / "trace.csv", kTraceHeader);
    CsvWriter actions_csv(config.output_dir / "actions.csv",
                          action_header(bundle.policy.action_dim()));

    JointState state = env.reset(config.seed);
    bool fell = false;
    for (int step = 0; step < options.gait_steps; ++step) {
      const ControlPointSet actions =
          map ? act_corrected(bundle.policy, *map, state, bundle.box)
              : act(bundle.policy, state, bundle.box);
      std::vector<double> action_row = {static_cast<double>(step)};
      for (int i = 0; i < actions.count(); ++i)
        action_row.push_back(actions.radius(i));
      actions_csv.write_row(action_row);

      const StepResult result = env.step_gait(actions);
      append_step_trace(trace, env, step, result.reward);
      state = result.state;
      if (result.done) {
        fell = true;
        break;
      }
    }
    trace.close();
    actions_csv.close();

    write_manifest(loaded, "rollout",
                   {{"policy", options.policy_path.string()},
                    {"gait", gait_name},
                    {"steps", options.gait_steps},
                    {"sim2real", options.sim2real_path
                                     ? options.sim2real_path->string()
                                     : ""}},
                   {"trace.csv", "actions.csv"});
    if (fell) {
      std::fprintf(stderr, "robot fell after %d gait steps\n",
                   env.gait_steps_taken());
      return kExitFall;
    }
    return kExitOk;
  });
}

int cmd_fit_sim2real(const FitSim2RealOptions& options) {
  return run_guarded([&]() {
    const LoadedConfig loaded = load_config(options.common);

    const CsvTable table = read_csv(options.trace_path);
    std::vector<int> sim_cols(kStateDim), real_cols(kStateDim);
    for (int j = 0; j < kStateDim; ++j) {
      sim_cols[j] = table.column("sim_q" + std::to_string(j));
      real_cols[j] = table.column("real_q" + std::to_string(j));
      if (sim_cols[j] < 0 || real_cols[j] < 0)
        throw FormatError(options.trace_path.string() +
                          ": missing sim_q/real_q columns");
    }
    const int weight_col = table.column("weight");

    StateTracePair trace;
    trace.sample_weights.resize(static_cast<int>(table.rows.size()));
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
      Vec12 sim, real;
      for (int j = 0; j < kStateDim; ++j) {
        sim[j] = table.rows[k][sim_cols[j]];
        real[j] = table.rows[k][real_cols[j]];
      }
      trace.sim_states.push_back(sim);
      trace.real_states.push_back(real);
      trace.sample_weights[static_cast<int>(k)] =
          weight_col >= 0 ? table.rows[k][weight_col] : 1.0;
    }

    const Sim2RealFit fit = fit_sim2real(trace);
    save_sim2real(fit, loaded.config.output_dir / "sim2real.json");

    std::printf("fitted sim-to-real map over %d samples\n", trace.size());
    for (int j = 0; j < kStateDim; ++j)
      std::printf("  joint %2d residual rms: %.6e rad\n", j,
                  fit.residual_rms[j]);
    std::printf("  m_hat condition number: %.3e\n", fit.condition_number);

    write_manifest(loaded, "fit-sim2real",
                   {{"trace", options.trace_path.string()}},
                   {"sim2real.json"});
    return kExitOk;
  });
}

int cmd_export_trajectory(const ExportTrajectoryOptions& options) {
  return run_guarded([&]() {
    const LoadedConfig loaded = load_config(options.common);
    const RunConfig& config = loaded.config;
    if (options.resolution < 2)
      throw ConfigError("export-trajectory: resolution must be >= 2");

    const PolicyBundle bundle = load_policy(options.policy_path);
    const std::string gait_name =
        options.common.gait ? *options.common.gait : bundle.gait;
    const GaitConfig gait = config.gaits.get(gait_name);

    JointState state = nominal_stance_state(config.robot);
    if (options.state_csv) {
      Vec12 q;
      std::stringstream ss(*options.state_csv);
      std::string cell;
      int i = 0;
      while (std::getline(ss, cell, ',') && i < kStateDim)
        q[i++] = std::stod(cell);
      if (i != kStateDim)
        throw ConfigError("export-trajectory: --state needs 12 values");
      state = JointState(q);
    }

    const ControlPointSet actions = act(bundle.policy, state, bundle.box);
    const FootTrajectory traj = build_trajectory(actions);

    std::vector<std::string> outputs;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const std::string name =
          std::string("trajectory_") + leg_name(static_cast<Leg>(leg)) + ".csv";
      CsvWriter writer(config.output_dir / name,
                       {"phase_rad", "radius_m", "x_m", "y_m", "z_m"});
      for (int i = 0; i < options.resolution; ++i) {
        const double phi = 2.0 * M_PI * i / options.resolution;
        const PhaseState phase{phi, config.env.step_duration};
        const double leg_phi = wrap_two_pi(phi + gait.phase_offsets[leg]);
        const double radius = traj.evaluate(leg_phi);
        const FootPoint p =
            foot_target(traj, phase, gait.phase_offsets[leg],
                        gait.leg_planes[leg], config.robot.foot_box);
        writer.write_row(
            {phi, radius, p.position.x(), p.position.y(), p.position.z()});
      }
      outputs.push_back(name);
    }

    write_manifest(loaded, "export-trajectory",
                   {{"policy", options.policy_path.string()},
                    {"gait", gait_name},
                    {"resolution", options.resolution}},
                   outputs);
    return kExitOk;
  });
}

std::vector<BlendState> transition_blend_schedule(const GaitConfig& from,
                                                  const GaitConfig& to,
                                                  double alpha, int gait_steps,
                                                  int switch_at) {
  std::vector<BlendState> schedule;
  schedule.reserve(gait_steps);
  BlendState state = blend_init(from);
  for (int step = 0; step < gait_steps; ++step) {
    if (step >= switch_at) state = blend_gaits(state, to, alpha);
    schedule.push_back(state);
  }
  return schedule;
}

int cmd_transition(const TransitionOptions& options) {
  return run_guarded([&]() {
    const LoadedConfig loaded = load_config(options.common);
    const RunConfig& config = loaded.config;
    if (!(options.alpha > 0.0) || options.alpha > 1.0)
      throw ConfigError("transition: alpha must be in (0, 1]");
    if (options.gait_steps < 0)
      throw ConfigError("transition: steps must be nonnegative");

    const PolicyBundle bundle = load_policy(options.policy_path);
    const GaitConfig from = config.gaits.get(options.from_gait);
    const GaitConfig to = config.gaits.get(options.to_gait);

    const std::vector<BlendState> schedule = transition_blend_schedule(
        from, to, options.alpha, options.gait_steps, options.gait_steps / 2);

    std::vector<std::string> header = kTraceHeader;
    for (const char* leg : {"fl", "fr", "bl", "br"})
      header.push_back(std::string("blend_yaw_") + leg);
    for (const char* leg : {"fl", "fr", "bl", "br"})
      header.push_back(std::string("blend_offset_") + leg);

    QuadrupedEnv env(config.robot, config.env, from);
    CsvWriter trace(config.output_dir / "trace.csv", header);
    CsvWriter actions_csv(config.output_dir / "actions.csv",
                          action_header(bundle.policy.action_dim()));

    JointState state = env.reset(config.seed);
    bool fell = false;
    for (int step = 0; step < options.gait_steps; ++step) {
      const BlendState& blend = schedule[step];
      const ControlPointSet actions = act(bundle.policy, state, bundle.box);
      std::vector<double> action_row = {static_cast<double>(step)};
      for (int i = 0; i < actions.count(); ++i)
        action_row.push_back(actions.radius(i));
      actions_csv.write_row(action_row);

      std::array<GaitPlane, kNumLegs> planes;
      for (int leg = 0; leg < kNumLegs; ++leg)
        planes[leg] = blend_plane(blend, leg);

      const StepResult result = env.step_gait(actions, planes, blend.offset);
      std::vector<double> extra;
      for (int leg = 0; leg < kNumLegs; ++leg) extra.push_back(blend.yaw[leg]);
      for (int leg = 0; leg < kNumLegs; ++leg)
        extra.push_back(blend.offset[leg]);
      append_step_trace(trace, env, step, result.reward, extra);
      state = result.state;
      if (result.done) {
        fell = true;
        break;
      }
    }
    trace.close();
    actions_csv.close();

    write_manifest(loaded, "transition",
                   {{"policy", options.policy_path.string()},
                    {"from", options.from_gait},
                    {"to", options.to_gait},
                    {"alpha", options.alpha},
                    {"steps", options.gait_steps}},
                   {"trace.csv", "actions.csv"});
    if (fell) {
      std::fprintf(stderr, "robot fell after %d gait steps\n",
                   env.gait_steps_taken());
      return kExitFall;
    }
    return kExitOk;
  });
}

}  // namespace gaitforge::cli
