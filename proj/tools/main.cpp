#include <CLI11.hpp>

#include "gaitforge/cli_commands.hpp"
#include "gaitforge/version.hpp"

namespace cli = gaitforge::cli;

namespace {

void add_common(CLI::App* cmd, cli::CommonOptions& common) {
  cmd->add_option("--config", common.config_path,
                  "run configuration file (YAML)");
  cmd->add_option("--seed", common.seed, "master seed override");
  cmd->add_option("--gait", common.gait,
                  "gait name: forward_trot|backward_trot|side_step|turn");
  cmd->add_option("--out", common.output_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaitforge: spline-gait quadruped policies trained by "
               "augmented random search"};
  app.set_version_flag("--version", gaitforge::kVersion);
  app.require_subcommand(1);

  cli::TrainOptions train_opts;
  CLI::App* train = app.add_subcommand("train", "train a policy");
  add_common(train, train_opts.common);
  train->add_option("--iters", train_opts.iterations, "ARS iterations");
  train->add_option("--workers", train_opts.workers, "rollout worker threads");

  cli::RolloutOptions rollout_opts;
  CLI::App* rollout =
      app.add_subcommand("rollout", "run a trained policy and record traces");
  add_common(rollout, rollout_opts.common);
  rollout->add_option("policy", rollout_opts.policy_path, "policy bundle file")
      ->required();
  rollout->add_option("--steps", rollout_opts.gait_steps, "gait steps to run");
  rollout->add_option("--sim2real", rollout_opts.sim2real_path,
                      "sim-to-real map file; actions use the corrected policy");

  cli::FitSim2RealOptions fit_opts;
  CLI::App* fit = app.add_subcommand(
      "fit-sim2real", "fit the affine state correction from a paired trace");
  add_common(fit, fit_opts.common);
  fit->add_option("trace", fit_opts.trace_path,
                  "CSV with t_s, sim_q0..q11, real_q0..q11, weight columns")
      ->required();

  cli::ExportTrajectoryOptions export_opts;
  CLI::App* exp = app.add_subcommand("export-trajectory",
                                     "sample per-leg foot splines to CSV");
  add_common(exp, export_opts.common);
  exp->add_option("policy", export_opts.policy_path, "policy bundle file")
      ->required();
  exp->add_option("--resolution", export_opts.resolution, "samples per leg");
  exp->add_option("--state", export_opts.state_csv,
                  "12 comma-separated joint angles (default: stance pose)");

  cli::TransitionOptions transition_opts;
  CLI::App* transition = app.add_subcommand(
      "transition", "roll out a policy while blending between two gaits");
  add_common(transition, transition_opts.common);
  transition
      ->add_option("policy", transition_opts.policy_path, "policy bundle file")
      ->required();
  transition->add_option("--from", transition_opts.from_gait, "starting gait")
      ->required();
  transition->add_option("--to", transition_opts.to_gait, "target gait")
      ->required();
  transition->add_option("--alpha", transition_opts.alpha,
                         "low-pass coefficient in (0, 1]");
  transition->add_option("--steps", transition_opts.gait_steps,
                         "total gait steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  if (train->parsed()) return cli::cmd_train(train_opts);
  if (rollout->parsed()) return cli::cmd_rollout(rollout_opts);
  if (fit->parsed()) return cli::cmd_fit_sim2real(fit_opts);
  if (exp->parsed()) return cli::cmd_export_trajectory(export_opts);
  if (transition->parsed()) return cli::cmd_transition(transition_opts);
  return cli::kExitConfig;
}
