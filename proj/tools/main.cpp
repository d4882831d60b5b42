// Command-line front end: train / eval / demo-gen / demo-analyze / suite /
// curves. Exit codes: 0 ok, 1 bad configuration or arguments, 2 runtime
// invariant violation.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sagail/checkpoint.hpp"
#include "sagail/config.hpp"
#include "sagail/demos.hpp"
#include "sagail/training.hpp"

namespace {

using namespace sagail;

struct TrainCli {
  std::string config_path;
  std::string preset = "desk";
  std::string env_id;
  std::string algo;
  std::string demo_path;
  std::string out_dir;
  std::string run_name;
  std::string resume;
  std::string demo_sampling;
  int epochs = -1;
  int cycles = -1;
  std::vector<std::uint64_t> seeds;
  double c_comb = -1.0;
  double delta_gail = -1.0;
};

TrainConfig build_train_config(const TrainCli& cli) {
  TrainConfig cfg;
  if (!cli.config_path.empty()) {
    cfg = load_train_config(cli.config_path);
  } else {
    if (cli.env_id.empty() || cli.algo.empty())
      throw config_error("train: either --config or both --env and --algo are required");
    cfg = preset_config(cli.preset, cli.env_id, algo_from_name(cli.algo));
  }
  if (!cli.env_id.empty()) cfg.env_id = cli.env_id;
  if (!cli.algo.empty()) cfg.algo = algo_from_name(cli.algo);
  if (!cli.demo_path.empty()) cfg.demo_path = cli.demo_path;
  if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
  if (!cli.run_name.empty()) cfg.run_name = cli.run_name;
  if (cli.epochs >= 0) cfg.epochs = cli.epochs;
  if (cli.cycles >= 0) cfg.cycles_per_epoch = cli.cycles;
  if (!cli.seeds.empty()) cfg.seeds = cli.seeds;
  if (cli.c_comb >= 0.0) cfg.c_comb = cli.c_comb;
  if (cli.delta_gail >= 0.0) cfg.gail.schedule.initial = cli.delta_gail;
  if (!cli.demo_sampling.empty()) {
    if (cli.demo_sampling == "union") cfg.demo_sampling = DemoSampling::union_uniform;
    else if (cli.demo_sampling == "ratio") cfg.demo_sampling = DemoSampling::ratio;
    else throw config_error("train: --demo-sampling expects union|ratio");
  }
  return cfg;
}

int cmd_train(const TrainCli& cli) {
  TrainConfig cfg = build_train_config(cli);
  validate_config(cfg);
  const std::uint64_t seed = cfg.seeds.front();
  RunResult result = [&] {
    if (!cli.resume.empty()) {
      Trainer t(cfg, seed, cli.resume);
      return t.run();
    }
    return run_training(cfg, seed);
  }();
  if (!result.rows.empty()) {
    const EpochRow& last = result.rows.back();
    std::cout << "final: epoch " << last.epoch << " success " << last.success_rate << " return "
              << last.mean_return << "\n";
  }
  if (!result.metrics_csv_path.empty())
    std::cout << "metrics: " << result.metrics_csv_path << "\n"
              << "checkpoint: " << result.checkpoint_path << "\n";
  return 0;
}

int cmd_eval(const std::string& ckpt_path, const std::string& env_id, int episodes,
             std::uint64_t seed) {
  LoadedCheckpoint ckpt = load_checkpoint(ckpt_path);
  std::unique_ptr<Env> env = make_env(env_id.empty() ? ckpt.env_spec.id : env_id);
  if (!env->spec().compatible_with(ckpt.env_spec))
    throw config_error("eval: checkpoint environment (" + ckpt.env_spec.id +
                       ") does not match " + env->spec().id);
  const EvalResult r = evaluate_policy(*ckpt.agent, *env, episodes, seed);
  std::cout << "episodes: " << episodes << "\nsuccess_rate: " << r.success_rate
            << "\nmean_return: " << r.mean_return << "\n";
  return 0;
}

int cmd_demo_gen(const std::string& env_id, const std::string& profile_name, double noise,
                 double skew, double hold, int count, std::uint64_t seed,
                 const std::string& out_path) {
  std::unique_ptr<Env> env = make_env(env_id);
  DemoProfile profile = named_profile(profile_name);
  if (noise >= 0.0) profile.noise_scale = noise;
  if (skew >= 0.0) profile.coverage_skew = skew;
  if (hold > 0.0) profile.hold_fraction_target = hold;
  DemoDataset ds = generate_demos(*env, profile, count, seed);
  save_dataset(ds, out_path);
  const CoverageReport rep = analyze_coverage(ds);
  std::cout << "wrote " << ds.trajectories.size() << " trajectories to " << out_path << "\n"
            << "mean hold fraction: " << rep.mean_hold_fraction << "\n";
  return 0;
}

int cmd_demo_analyze(const std::string& path, const std::string& csv_path) {
  const DemoDataset ds = load_dataset(path);
  const CoverageReport rep = analyze_coverage(ds);
  std::cout << coverage_table_text(rep);
  if (!csv_path.empty()) {
    write_coverage_csv(rep, csv_path);
    std::cout << "histogram csv: " << csv_path << "\n";
  }
  return 0;
}

int cmd_suite(const TrainCli& cli) {
  TrainConfig cfg = build_train_config(cli);
  validate_config(cfg);
  SuiteResult suite = run_suite(cfg);
  for (const auto& [seed, err] : suite.failures)
    std::cerr << "seed " << seed << " failed: " << err << "\n";
  std::cout << "completed seeds: " << suite.runs.size() << "/" << cfg.seeds.size() << "\n";
  if (!suite.curves_csv_path.empty()) std::cout << "curves: " << suite.curves_csv_path << "\n";
  if (!suite.failures.empty()) std::cerr << "[warn] aggregation over completed seeds only\n";
  return 0;
}

int cmd_curves(const std::vector<std::string>& csvs) {
  std::cout << summarize_metrics(csvs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-goal RL with self-adaptive adversarial imitation learning"};
  app.require_subcommand(1);

  TrainCli train_cli;
  auto add_train_flags = [&](CLI::App* sub) {
    sub->add_option("--config", train_cli.config_path, "JSON config file");
    sub->add_option("--preset", train_cli.preset, "desk|paper (default desk)");
    sub->add_option("--env", train_cli.env_id, "environment id");
    sub->add_option("--algo", train_cli.algo, "her|ddpgfd_her|goal_gail|goal_sagail");
    sub->add_option("--demos", train_cli.demo_path, "demo dataset path");
    sub->add_option("--out", train_cli.out_dir, "output directory");
    sub->add_option("--name", train_cli.run_name, "run name prefix for outputs");
    sub->add_option("--epochs", train_cli.epochs, "override epoch count");
    sub->add_option("--cycles", train_cli.cycles, "override cycles per epoch");
    sub->add_option("--seeds", train_cli.seeds, "seed list")->delimiter(',');
    sub->add_option("--c-comb", train_cli.c_comb, "combined-distance threshold");
    sub->add_option("--delta-gail", train_cli.delta_gail, "initial adversarial reward weight");
    sub->add_option("--demo-sampling", train_cli.demo_sampling, "union|ratio");
  };

  CLI::App* train = app.add_subcommand("train", "train one seed");
  add_train_flags(train);
  train->add_option("--resume", train_cli.resume, "checkpoint to continue from");

  std::string eval_ckpt, eval_env;
  int eval_episodes = 100;
  std::uint64_t eval_seed = 7;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--checkpoint", eval_ckpt, "checkpoint file")->required();
  eval->add_option("--env", eval_env, "environment id (default: from checkpoint)");
  eval->add_option("--episodes", eval_episodes, "evaluation episodes");
  eval->add_option("--seed", eval_seed, "evaluation seed");

  std::string gen_env, gen_profile = "optimal", gen_out = "demos.jsonl";
  double gen_noise = -1.0, gen_skew = -1.0, gen_hold = -1.0;
  int gen_count = 100;
  std::uint64_t gen_seed = 1;
  CLI::App* demo_gen = app.add_subcommand("demo-gen", "generate scripted demonstrations");
  demo_gen->add_option("--env", gen_env, "environment id")->required();
  demo_gen->add_option("--profile", gen_profile, "optimal|suboptimal");
  demo_gen->add_option("--noise", gen_noise, "override noise scale");
  demo_gen->add_option("--skew", gen_skew, "override coverage skew [0,1]");
  demo_gen->add_option("--hold", gen_hold, "override hold-fraction target (0,1]");
  demo_gen->add_option("--count", gen_count, "trajectories to keep");
  demo_gen->add_option("--seed", gen_seed, "generation seed");
  demo_gen->add_option("--out", gen_out, "output dataset path");

  std::string an_path, an_csv;
  CLI::App* demo_an = app.add_subcommand("demo-analyze", "goal-coverage analysis of a dataset");
  demo_an->add_option("--demos", an_path, "dataset path")->required();
  demo_an->add_option("--csv", an_csv, "write histogram bins to this CSV");

  CLI::App* suite = app.add_subcommand("suite", "train all seeds and aggregate curves");
  add_train_flags(suite);

  std::vector<std::string> curve_csvs;
  CLI::App* curves = app.add_subcommand("curves", "summarize metrics CSVs");
  curves->add_option("csvs", curve_csvs, "metrics CSV files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(train_cli);
    if (eval->parsed()) return cmd_eval(eval_ckpt, eval_env, eval_episodes, eval_seed);
    if (demo_gen->parsed())
      return cmd_demo_gen(gen_env, gen_profile, gen_noise, gen_skew, gen_hold, gen_count, gen_seed,
                          gen_out);
    if (demo_an->parsed()) return cmd_demo_analyze(an_path, an_csv);
    if (suite->parsed()) return cmd_suite(train_cli);
    if (curves->parsed()) return cmd_curves(curve_csvs);
  } catch (const sagail::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
