#include "sagail/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

namespace sagail {

namespace {

// Stream labels for deriving independent RNG streams from the run seed.
enum Stream : std::uint64_t {
  kAgentInit = 1,
  kDiscInit = 2,
  kCollect = 3,
  kDiscTrain = 4,
  kPolicy = 5,
  kEval = 6,
};

}  // namespace

EvalResult evaluate_policy(const DdpgAgent& agent, Env& env, int episodes, std::uint64_t seed) {
  EvalResult out;
  out.episodes.reserve(episodes);
  Rng root(seed);
  double return_sum = 0.0;
  int successes = 0;
  for (int e = 0; e < episodes; ++e) {
    Rng rng = root.derive({static_cast<std::uint64_t>(e)});
    env.reset(rng);
    Trajectory traj = run_episode(env, [&](const Env& v) {
      return agent.act(v.state(), v.desired_goal(), /*explore=*/false, rng);
    });
    EvalEpisode rec;
    rec.initial_goal_distance =
        goal_distance(env.spec().goal, traj.achieved.front(), traj.desired_goal);
    rec.success = traj.achieved_at_final();
    rec.episode_return = traj.episode_return;
    successes += rec.success ? 1 : 0;
    return_sum += rec.episode_return;
    out.episodes.push_back(rec);
  }
  out.success_rate = episodes > 0 ? static_cast<double>(successes) / episodes : 0.0;
  out.mean_return = episodes > 0 ? return_sum / episodes : 0.0;
  return out;
}

Trainer::Trainer(TrainConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), seed_(seed), rng_(seed) {
  init(nullptr);
}

Trainer::Trainer(TrainConfig cfg, std::uint64_t seed, const std::string& resume_checkpoint)
    : cfg_(std::move(cfg)), seed_(seed), rng_(seed) {
  init(&resume_checkpoint);
}

std::string Trainer::out_path(const std::string& stem, const std::string& ext) const {
  return cfg_.out_dir + "/" + cfg_.run_name + "_" + stem + "_seed" + std::to_string(seed_) + ext;
}

void Trainer::init(const std::string* resume_checkpoint) {
  validate_config(cfg_);
  env_ = make_env(cfg_.env_id, cfg_.env_params);
  eval_env_ = env_->clone();
  const EnvSpec& spec = env_->spec();

  if (cfg_.gail.schedule.anneal_horizon_epochs <= 0)
    cfg_.gail.schedule.anneal_horizon_epochs = std::max(1, cfg_.epochs);
  admission_.c_comb = cfg_.c_comb > 0.0 ? cfg_.c_comb : default_c_comb(spec);
  admission_.require_success = cfg_.require_success;
  cfg_.ddpg.behavior_cloning = cfg_.algo == Algo::ddpgfd_her;

  Rng agent_rng = rng_.derive({kAgentInit});
  agent_ = std::make_unique<DdpgAgent>(spec, cfg_.ddpg, agent_rng);
  if (algo_uses_discriminator(cfg_.algo)) {
    Rng disc_rng = rng_.derive({kDiscInit});
    disc_ = std::make_unique<Discriminator>(spec, cfg_.gail, disc_rng);
  }

  agent_buf_ = std::make_unique<TrajectoryBuffer>(cfg_.agent_buffer_capacity, spec);
  if (algo_uses_demos(cfg_.algo)) {
    DemoDataset demos = load_dataset(cfg_.demo_path);
    try {
      check_dataset_spec(demos, spec);
    } catch (const std::exception& e) {
      throw config_error(e.what());
    }
    const size_t cap = static_cast<size_t>(cfg_.expert_capacity_multiple) *
                       std::max<size_t>(1, demos.trajectories.size());
    expert_buf_ = std::make_unique<TrajectoryBuffer>(cap, spec);
    for (Trajectory& t : demos.trajectories) {
      t.source = TrajectorySource::demo_seed;
      agent_->observe_episode(t);
      expert_buf_->push(std::move(t));
    }
  }

  if (resume_checkpoint) {
    LoadedCheckpoint loaded = load_checkpoint(*resume_checkpoint);
    if (loaded.algo != algo_name(cfg_.algo))
      throw config_error("resume: checkpoint algo " + loaded.algo + " does not match config");
    if (!loaded.env_spec.compatible_with(spec))
      throw config_error("resume: checkpoint environment does not match config");
    if (algo_uses_discriminator(cfg_.algo) != static_cast<bool>(loaded.disc))
      throw config_error("resume: checkpoint discriminator presence does not match config");
    agent_ = std::move(loaded.agent);
    disc_ = std::move(loaded.disc);
    epoch_ = loaded.epochs_completed;
    rng_.restore_state(loaded.rng_state);
    resumed_ = true;
    // Expert-buffer snapshot, written next to the checkpoint for the
    // admission-based variant (the buffer evolves during training there).
    if (algo_uses_admission(cfg_.algo)) {
      const std::string snap = *resume_checkpoint + ".expert.jsonl";
      if (std::filesystem::exists(snap)) {
        DemoDataset re = load_dataset(snap);
        check_dataset_spec(re, spec);
        expert_buf_ = std::make_unique<TrajectoryBuffer>(expert_buf_->capacity(), spec);
        for (Trajectory& t : re.trajectories) expert_buf_->push(std::move(t));
      } else if (cfg_.log_progress) {
        std::cerr << "[resume] no expert-buffer snapshot beside checkpoint; "
                     "starting from the demo dataset\n";
      }
    }
  }
}

std::vector<std::string> Trainer::modules() const {
  std::vector<std::string> m = {"env:" + cfg_.env_id, "agent:ddpg", "replay:agent_buffer", "her"};
  if (expert_buf_) m.push_back("replay:expert_buffer");
  if (disc_) m.push_back("gail:discriminator");
  if (algo_uses_admission(cfg_.algo)) m.push_back("selection:admission");
  if (cfg_.ddpg.behavior_cloning) m.push_back("agent:behavior_cloning");
  return m;
}

double Trainer::current_delta_gail() const {
  if (!disc_) return 0.0;
  return cfg_.gail.schedule.value(epoch_);
}

double Trainer::current_demo_ratio() const {
  if (!expert_buf_ || expert_buf_->empty()) return 0.0;
  const double union_ratio = union_demo_ratio(agent_buf_.get(), expert_buf_.get());
  if (cfg_.demo_sampling == DemoSampling::union_uniform) return union_ratio;
  const long total_cycles = static_cast<long>(cfg_.epochs) * cfg_.cycles_per_epoch;
  const long done_cycles = static_cast<long>(epoch_) * cfg_.cycles_per_epoch + cycle_in_epoch_;
  const double progress =
      total_cycles > 0 ? static_cast<double>(done_cycles) / total_cycles : 1.0;
  const double t =
      cfg_.demo_ratio_anneal_fraction <= 0.0
          ? 1.0
          : std::min(1.0, progress / cfg_.demo_ratio_anneal_fraction);
  return (1.0 - t) * cfg_.demo_ratio_initial + t * union_ratio;
}

void Trainer::collect_episode(int epoch, int cycle, int index) {
  Rng rng = rng_.derive({kCollect, static_cast<std::uint64_t>(epoch),
                         static_cast<std::uint64_t>(cycle), static_cast<std::uint64_t>(index)});
  env_->reset(rng);
  Trajectory traj = run_episode(*env_, [&](const Env& v) {
    return agent_->act(v.state(), v.desired_goal(), /*explore=*/true, rng);
  });
  traj.source = TrajectorySource::agent;
  agent_->observe_episode(traj);

  if (algo_uses_admission(cfg_.algo)) {
    const AdmissionVerdict verdict =
        decide_admission(traj, *expert_buf_, env_->spec().goal, admission_);
    epoch_admissions_.record(verdict);
    if (verdict.admitted()) {
      traj.source = TrajectorySource::self_admitted;
      expert_buf_->push(std::move(traj));
      return;
    }
  }
  agent_buf_->push(std::move(traj));
}

void Trainer::run_cycle() {
  // Step 1: data collection and storage (with admission routing).
  for (int m = 0; m < cfg_.episodes_per_cycle; ++m) collect_episode(epoch_, cycle_in_epoch_, m);

  // Step 2: discriminator training.
  if (disc_) {
    Rng rng = rng_.derive({kDiscTrain, static_cast<std::uint64_t>(epoch_),
                           static_cast<std::uint64_t>(cycle_in_epoch_)});
    const DiscTrainStats stats = train_discriminator(
        *disc_, *agent_buf_, *expert_buf_, cfg_.her, cfg_.gail.batches_per_cycle,
        cfg_.gail.batch_size, agent_->obs_normalizer(), agent_->goal_normalizer(), rng);
    if (stats.skipped_empty_buffer && cfg_.log_progress)
      std::cerr << "[warn] discriminator training skipped: empty replay buffer\n";
    if (stats.steps > 0) {
      epoch_disc_loss_sum_ += stats.mean_loss * stats.steps;
      epoch_disc_loss_count_ += stats.steps;
    }
  }

  // Step 3: policy updates with hindsight relabeling and reward mixing.
  const double delta = current_delta_gail();
  double reward_lo = -1.0, reward_hi = 0.0;
  if (disc_) mixed_reward_bounds(delta, cfg_.gail, reward_lo, reward_hi);
  for (int b = 0; b < cfg_.policy_batches_per_cycle; ++b) {
    Rng rng = rng_.derive({kPolicy, static_cast<std::uint64_t>(epoch_),
                           static_cast<std::uint64_t>(cycle_in_epoch_),
                           static_cast<std::uint64_t>(b)});
    std::vector<BatchItem> batch = sample_transitions(
        agent_buf_.get(), expert_buf_.get(), cfg_.policy_batch_size, current_demo_ratio(), rng);
    relabel(batch, env_->spec().goal, cfg_.her, rng);
    if (disc_) {
      const Vec d_values = disc_->rewards(batch, agent_->obs_normalizer(), agent_->goal_normalizer());
      for (size_t i = 0; i < batch.size(); ++i)
        batch[i].reward = mix_reward(batch[i].reward, d_values[i], delta);
    }
    agent_->update(batch, reward_lo, reward_hi);
  }
  agent_->soft_update_targets();
  ++cycle_in_epoch_;
}

EpochRow Trainer::run_epoch() {
  const auto t0 = std::chrono::steady_clock::now();
  cycle_in_epoch_ = 0;
  epoch_admissions_ = AdmissionStats{};
  epoch_disc_loss_sum_ = 0.0;
  epoch_disc_loss_count_ = 0;

  for (int c = 0; c < cfg_.cycles_per_epoch; ++c) run_cycle();

  const EvalResult eval = evaluate_policy(
      *agent_, *eval_env_, cfg_.eval_episodes,
      rng_.derive({kEval, static_cast<std::uint64_t>(epoch_)}).seed());

  EpochRow row;
  row.epoch = epoch_ + 1;
  row.seed = seed_;
  row.success_rate = eval.success_rate;
  row.mean_return = eval.mean_return;
  row.admit_direct = epoch_admissions_.admit_direct;
  row.admit_better = epoch_admissions_.admit_better;
  row.reject = epoch_admissions_.reject;
  row.disc_loss = epoch_disc_loss_count_ > 0 ? epoch_disc_loss_sum_ / epoch_disc_loss_count_ : 0.0;
  row.delta_gail = current_delta_gail();
  row.mean_d_min = epoch_admissions_.mean_d_min();
  if (expert_buf_ && !expert_buf_->empty()) {
    row.re_mean_goal_distance = expert_buf_->mean_goal_pair_distance();
    row.re_size = static_cast<long>(expert_buf_->size());
  }
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ++epoch_;
  rows_.push_back(row);

  if (cfg_.log_progress) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "[seed %llu epoch %3d] success %.3f return %8.2f delta %.3f disc %8.4f "
                  "admit %ld/%ld reject %ld (%.1fs)",
                  static_cast<unsigned long long>(seed_), row.epoch, row.success_rate,
                  row.mean_return, row.delta_gail, row.disc_loss, row.admit_direct,
                  row.admit_better, row.reject, row.wall_seconds);
    std::cout << buf << std::endl;
  }
  return row;
}

void Trainer::write_outputs(bool append_metrics) {
  if (cfg_.out_dir.empty()) return;
  std::filesystem::create_directories(cfg_.out_dir);
  std::vector<EpochRow> fresh(rows_.begin() + rows_flushed_, rows_.end());
  write_metrics_csv(fresh, out_path("metrics", ".csv"), append_metrics);
  rows_flushed_ = rows_.size();
  write_run_json(rows_, train_config_to_json_text(cfg_), modules(), out_path("run", ".json"));

  const std::string ckpt = out_path("checkpoint", ".json");
  save_checkpoint(ckpt, algo_name(cfg_.algo), *agent_, disc_.get(), epoch_, rng_.save_state());
  if (algo_uses_admission(cfg_.algo) && cfg_.require_success && expert_buf_ &&
      !expert_buf_->empty()) {
    DemoDataset snap;
    const EnvSpec& spec = env_->spec();
    snap.header.env_id = spec.id;
    snap.header.state_dim = spec.state_dim;
    snap.header.action_dim = spec.action_dim;
    snap.header.goal_dim = spec.goal.dimension;
    snap.header.horizon = spec.horizon;
    snap.header.metric = metric_name(spec.goal.metric);
    snap.header.tolerance = spec.goal.tolerance;
    snap.header.max_goal_distance = spec.goal.max_distance;
    snap.header.goal_feat =
        spec.goal_feat == GoalFeaturization::angle_cos_sin ? "angle_cos_sin" : "identity";
    snap.header.seed = seed_;
    snap.header.count = static_cast<int>(expert_buf_->size());
    for (size_t i = 0; i < expert_buf_->size(); ++i)
      snap.trajectories.push_back((*expert_buf_)[i]);
    save_dataset(snap, ckpt + ".expert.jsonl");
  }
}

RunResult Trainer::run() {
  bool append = resumed_;
  if (cfg_.epochs == 0 || epoch_ >= cfg_.epochs) {
    // Nothing to train: evaluate the current policy once and report it.
    const EvalResult eval = evaluate_policy(
        *agent_, *eval_env_, cfg_.eval_episodes,
        rng_.derive({kEval, static_cast<std::uint64_t>(epoch_)}).seed());
    EpochRow row;
    row.epoch = epoch_;
    row.seed = seed_;
    row.success_rate = eval.success_rate;
    row.mean_return = eval.mean_return;
    rows_.push_back(row);
    write_outputs(append);
  }
  while (epoch_ < cfg_.epochs) {
    run_epoch();
    if (cfg_.checkpoint_every_epochs > 0 &&
        (epoch_ % cfg_.checkpoint_every_epochs == 0 || epoch_ == cfg_.epochs)) {
      write_outputs(append);
      append = true;
    }
  }

  RunResult result;
  result.seed = seed_;
  result.rows = rows_;
  if (!cfg_.out_dir.empty()) {
    result.metrics_csv_path = out_path("metrics", ".csv");
    result.checkpoint_path = out_path("checkpoint", ".json");
  }
  return result;
}

RunResult run_training(const TrainConfig& cfg, std::uint64_t seed) {
  Trainer trainer(cfg, seed);
  return trainer.run();
}

SuiteResult run_suite(const TrainConfig& cfg) {
  validate_config(cfg);
  SuiteResult suite;
  std::vector<std::vector<EpochRow>> per_seed;
  for (std::uint64_t seed : cfg.seeds) {
    try {
      RunResult r = run_training(cfg, seed);
      per_seed.push_back(r.rows);
      suite.runs.push_back(std::move(r));
    } catch (const std::exception& e) {
      std::cerr << "[warn] seed " << seed << " failed: " << e.what() << "\n";
      suite.failures.emplace_back(seed, e.what());
    }
  }
  suite.curve = aggregate_curves(per_seed);
  if (!cfg.out_dir.empty() && !suite.curve.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    suite.curves_csv_path = cfg.out_dir + "/" + cfg.run_name + "_curves.csv";
    write_curves_csv(suite.curve, suite.curves_csv_path);
  }
  return suite;
}

}  // namespace sagail
