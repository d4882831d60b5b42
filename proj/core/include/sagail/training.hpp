#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sagail/checkpoint.hpp"
#include "sagail/config.hpp"
#include "sagail/demos.hpp"
#include "sagail/metrics.hpp"
#include "sagail/selection.hpp"

namespace sagail {

struct EvalEpisode {
  double initial_goal_distance = 0.0;
  bool success = false;  // at the goal on the final timestep
  double episode_return = 0.0;
};

struct EvalResult {
  double success_rate = 0.0;
  double mean_return = 0.0;
  std::vector<EvalEpisode> episodes;
};

// Deterministic evaluation: exploration off, episodes seeded from `seed`.
EvalResult evaluate_policy(const DdpgAgent& agent, Env& env, int episodes, std::uint64_t seed);

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<EpochRow> rows;
  std::string metrics_csv_path;   // empty when out_dir unset
  std::string checkpoint_path;
};

// One (config, seed) training run: Algorithm-step cycles of collection with
// admission routing, discriminator training, and HER policy updates with
// reward mixing, followed by a deterministic evaluation per epoch.
class Trainer {
 public:
  Trainer(TrainConfig cfg, std::uint64_t seed);
  // Continue a run from a saved checkpoint (replays demo initialization and,
  // when present, the expert-buffer snapshot written beside the checkpoint).
  Trainer(TrainConfig cfg, std::uint64_t seed, const std::string& resume_checkpoint);

  RunResult run();

  // Stepping surface for tests.
  void run_cycle();
  EpochRow run_epoch();
  int epochs_completed() const { return epoch_; }

  const DdpgAgent& agent() const { return *agent_; }
  const Discriminator* discriminator() const { return disc_.get(); }
  const TrajectoryBuffer& agent_buffer() const { return *agent_buf_; }
  const TrajectoryBuffer* expert_buffer() const { return expert_buf_.get(); }
  double current_delta_gail() const;
  double current_demo_ratio() const;
  const TrainConfig& config() const { return cfg_; }
  std::vector<std::string> modules() const;

 private:
  void init(const std::string* resume_checkpoint);
  void collect_episode(int epoch, int cycle, int index);
  void write_outputs(bool append_metrics);
  std::string out_path(const std::string& stem, const std::string& ext) const;

  TrainConfig cfg_;
  std::uint64_t seed_ = 0;
  Rng rng_;
  std::unique_ptr<Env> env_;
  std::unique_ptr<Env> eval_env_;
  std::unique_ptr<DdpgAgent> agent_;
  std::unique_ptr<Discriminator> disc_;
  std::unique_ptr<TrajectoryBuffer> agent_buf_;
  std::unique_ptr<TrajectoryBuffer> expert_buf_;
  AdmissionConfig admission_;
  int epoch_ = 0;
  int cycle_in_epoch_ = 0;
  bool resumed_ = false;
  AdmissionStats epoch_admissions_;
  double epoch_disc_loss_sum_ = 0.0;
  int epoch_disc_loss_count_ = 0;
  std::vector<EpochRow> rows_;
  std::size_t rows_flushed_ = 0;
};

RunResult run_training(const TrainConfig& cfg, std::uint64_t seed);

struct SuiteResult {
  std::vector<RunResult> runs;
  std::vector<std::pair<std::uint64_t, std::string>> failures;  // (seed, error)
  std::vector<CurvePoint> curve;
  std::string curves_csv_path;
};

// Runs every seed in the config and aggregates curves; per-seed failures are
// reported and skipped rather than aborting the suite.
SuiteResult run_suite(const TrainConfig& cfg);

}  // namespace sagail
