#pragma once

#include <string>
#include <vector>

#include "sagail/adam.hpp"
#include "sagail/features.hpp"
#include "sagail/her.hpp"
#include "sagail/net.hpp"

namespace sagail {

// How the discriminator's raw score becomes a reward. The loss always goes
// through a sigmoid; the reward channel is configurable, with the raw score
// as the default.
enum class DiscRewardMode { raw, sigmoid, log_sigmoid };

std::string reward_mode_name(DiscRewardMode m);
DiscRewardMode reward_mode_from_name(const std::string& name);

enum class GailAnneal { none, linear_to_zero };

// Weight schedule for mixing the discriminator reward into the environment
// reward; a pure function of the epoch index.
struct GailWeightSchedule {
  double initial = 0.5;
  GailAnneal anneal = GailAnneal::linear_to_zero;
  int anneal_horizon_epochs = 50;

  double value(int epoch) const;
};

struct GailConfig {
  std::vector<int> hidden = {256, 256, 256, 256};
  double learning_rate = 1e-3;
  DiscRewardMode reward_mode = DiscRewardMode::raw;
  double reward_clip = 5.0;  // raw scores are clipped to +-reward_clip before mixing
  GailWeightSchedule schedule;
  int batches_per_cycle = 40;
  int batch_size = 512;
};

// Sigmoid probabilities are clamped into this range inside the loss, which
// bounds the loss at 2*ln(kProbClamp).
inline constexpr double kProbClamp = 1e-8;

// Goal-conditioned discriminator over [obs | action] rows. Scores are raw
// network outputs; the adversarial loss reads them through a sigmoid.
class Discriminator {
 public:
  Discriminator(const EnvSpec& spec, const GailConfig& cfg, Rng& rng);

  // Raw scores, one per input row.
  Vec scores(const Mat& inputs) const;

  // Reward-channel value for one (state, goal, action), including the mode
  // mapping and the raw-mode clip.
  double reward(const Vec& state, const Vec& goal, const Vec& action,
                const RunningNormalizer& obs_norm, const RunningNormalizer& goal_norm) const;
  Vec rewards(const std::vector<BatchItem>& batch, const RunningNormalizer& obs_norm,
              const RunningNormalizer& goal_norm) const;

  // One minimization step of the adversarial loss; returns the loss value.
  double train_step(const Mat& agent_inputs, const Mat& expert_inputs);

  const EnvSpec& env_spec() const { return spec_; }
  const GailConfig& config() const { return cfg_; }
  const DenseNet& net() const { return net_; }
  const AdamState& opt() const { return opt_; }
  void restore(DenseNet net, AdamState opt);

  // How often the raw-mode clip fired since construction; observability for
  // reward explosions.
  long clip_events() const { return clip_events_; }

 private:
  EnvSpec spec_;
  GailConfig cfg_;
  DenseNet net_;
  AdamState opt_;
  mutable long clip_events_ = 0;
};

// Adversarial loss: mean(log D(agent)) + mean(log(1 - D(expert))) with D
// read through a clamped sigmoid. Minimizing drives D -> 0 on agent data
// and D -> 1 on expert data.
double discriminator_loss(const Vec& agent_scores, const Vec& expert_scores);
double discriminator_loss(const Discriminator& disc, const Mat& agent_inputs,
                          const Mat& expert_inputs);

// r_combined = (1 - delta) * r_env + delta * d_value.
double mix_reward(double r_env, double d_value, double delta_gail);

// Feasible per-step bounds of the mixed reward given env rewards in [-1, 0]
// and discriminator values in [-d_clip, d_clip] (raw mode) or the mode's
// natural range.
void mixed_reward_bounds(double delta_gail, const GailConfig& cfg, double& lo, double& hi);

struct DiscTrainStats {
  int steps = 0;
  double mean_loss = 0.0;
  bool skipped_empty_buffer = false;
};

// Algorithm step 2: N_d adversarial updates, each on freshly sampled and
// hindsight-relabeled expert (R_E) and agent (R_B) transitions. Skips with a
// warning (returned in the stats) when either buffer is still empty.
DiscTrainStats train_discriminator(Discriminator& disc, const TrajectoryBuffer& agent_buf,
                                   const TrajectoryBuffer& expert_buf, const RelabelConfig& her_cfg,
                                   int batches, int batch_size, const RunningNormalizer& obs_norm,
                                   const RunningNormalizer& goal_norm, Rng& rng);

}  // namespace sagail
