#pragma once

#include <vector>

#include "sagail/adam.hpp"
#include "sagail/features.hpp"
#include "sagail/net.hpp"

namespace sagail {

struct DdpgConfig {
  double gamma = 0.98;
  double polyak = 0.05;  // target <- polyak * online + (1 - polyak) * target
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  double noise_scale = 0.2;      // Gaussian stddev as a fraction of the action bound
  double epsilon_random = 0.3;   // probability of a uniform random action
  double action_penalty = 1.0;   // coefficient on mean squared pre-tanh output
  std::vector<int> hidden = {256, 256, 256, 256};
  double actor_final_scale = 1e-2;  // shrink of the actor's last layer at init
  bool normalize_inputs = true;
  double normalizer_clip = 5.0;
  // DDPGfD-style behavior cloning on expert-flagged samples.
  bool behavior_cloning = false;
  double bc_weight = 1.0;
  bool q_filter = true;  // apply BC only where the critic ranks the demo action >= the actor's
};

// Goal-conditioned DDPG actor-critic with target networks. The actor network
// ends in an identity layer; the tanh squash to action bounds is applied on
// top of it, so the action-magnitude penalty can see the pre-tanh values.
class DdpgAgent {
 public:
  DdpgAgent(EnvSpec spec, DdpgConfig cfg, Rng& rng);

  // Deterministic policy action, optionally with Gaussian noise plus
  // epsilon-uniform exploration.
  Vec act(const Vec& state, const Vec& goal, bool explore, Rng& rng) const;

  // Feeds an episode into the input normalizers.
  void observe_episode(const Trajectory& traj);

  struct UpdateDiag {
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double mean_q = 0.0;
    int bc_applied = 0;  // expert rows that passed the Q-filter
  };

  // One critic gradient step and one actor gradient step on a batch whose
  // rewards are already final (relabeled and, for the adversarial variants,
  // mixed). [reward_min, reward_max] bounds the per-step reward and induces
  // the target clipping range.
  UpdateDiag update(const std::vector<BatchItem>& batch, double reward_min, double reward_max);

  void soft_update_targets();

  const EnvSpec& env_spec() const { return spec_; }
  const DdpgConfig& config() const { return cfg_; }
  const RunningNormalizer& obs_normalizer() const { return obs_norm_; }
  const RunningNormalizer& goal_normalizer() const { return goal_norm_; }

  // Checkpoint plumbing.
  const DenseNet& actor() const { return actor_; }
  const DenseNet& critic() const { return critic_; }
  const DenseNet& actor_target() const { return actor_target_; }
  const DenseNet& critic_target() const { return critic_target_; }
  const AdamState& actor_opt() const { return actor_opt_; }
  const AdamState& critic_opt() const { return critic_opt_; }
  void restore(DenseNet actor, DenseNet critic, DenseNet actor_target, DenseNet critic_target,
               AdamState actor_opt, AdamState critic_opt, RunningNormalizer obs_norm,
               RunningNormalizer goal_norm);

  // Q(s, g, a) for a batch already in network layout; used by tests.
  Mat critic_values(const Mat& obs, const Mat& actions_scaled) const;

 private:
  Vec policy_pre_tanh(const Vec& obs_row) const;

  EnvSpec spec_;
  DdpgConfig cfg_;
  DenseNet actor_, critic_;
  DenseNet actor_target_, critic_target_;
  AdamState actor_opt_, critic_opt_;
  RunningNormalizer obs_norm_, goal_norm_;
};

}  // namespace sagail
