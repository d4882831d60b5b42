#include "sagail/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sagail {

namespace {

std::vector<int> layer_stack(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes;
  sizes.push_back(in);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

DdpgAgent::DdpgAgent(EnvSpec spec, DdpgConfig cfg, Rng& rng)
    : spec_(std::move(spec)), cfg_(std::move(cfg)) {
  const int in = obs_dim(spec_);
  actor_ = DenseNet::make(layer_stack(in, cfg_.hidden, spec_.action_dim), Activation::relu,
                          Activation::identity, rng, cfg_.actor_final_scale);
  critic_ = DenseNet::make(layer_stack(in + spec_.action_dim, cfg_.hidden, 1), Activation::relu,
                           Activation::identity, rng);
  actor_target_ = actor_;
  critic_target_ = critic_;
  actor_opt_ = AdamState::for_net(actor_, cfg_.actor_lr);
  critic_opt_ = AdamState::for_net(critic_, cfg_.critic_lr);
  obs_norm_ = RunningNormalizer(spec_.state_dim, cfg_.normalizer_clip, cfg_.normalize_inputs);
  goal_norm_ = RunningNormalizer(spec_.goal_feature_dim(), cfg_.normalizer_clip, cfg_.normalize_inputs);
}

Vec DdpgAgent::policy_pre_tanh(const Vec& obs_row) const {
  Mat in(1, static_cast<int>(obs_row.size()));
  std::copy(obs_row.begin(), obs_row.end(), in.a.begin());
  Mat z = forward(actor_, in);
  return Vec(z.a.begin(), z.a.end());
}

Vec DdpgAgent::act(const Vec& state, const Vec& goal, bool explore, Rng& rng) const {
  const Vec obs = build_obs_row(state, goal, spec_, obs_norm_, goal_norm_);
  Vec z = policy_pre_tanh(obs);
  const double bound = spec_.action_bound;
  Vec a(z.size());
  for (size_t i = 0; i < z.size(); ++i) a[i] = bound * std::tanh(z[i]);
  if (explore) {
    for (double& x : a) x = std::clamp(x + cfg_.noise_scale * bound * rng.normal(), -bound, bound);
    if (rng.bernoulli(cfg_.epsilon_random))
      for (double& x : a) x = rng.uniform(-bound, bound);
  }
  return a;
}

void DdpgAgent::observe_episode(const Trajectory& traj) {
  for (const Vec& s : traj.states) obs_norm_.update(s);
  for (const Vec& g : traj.achieved) goal_norm_.update(goal_features(spec_, g));
  goal_norm_.update(goal_features(spec_, traj.desired_goal));
}

Mat DdpgAgent::critic_values(const Mat& obs, const Mat& actions_scaled) const {
  return forward(critic_, concat_cols(obs, actions_scaled));
}

DdpgAgent::UpdateDiag DdpgAgent::update(const std::vector<BatchItem>& batch, double reward_min,
                                        double reward_max) {
  if (batch.empty()) throw std::invalid_argument("DdpgAgent::update: empty batch");
  const int B = static_cast<int>(batch.size());
  const int a_dim = spec_.action_dim;
  UpdateDiag diag;

  const Mat obs = build_obs(batch, spec_, obs_norm_, goal_norm_, /*next_state=*/false);
  const Mat obs2 = build_obs(batch, spec_, obs_norm_, goal_norm_, /*next_state=*/true);
  const Mat act_stored = build_actions(batch, spec_);

  // Bootstrapped target with the return-range clip implied by the reward
  // bounds (fixed-horizon sparse tasks: no terminal cut).
  Mat z2 = forward(actor_target_, obs2);
  for (double& x : z2.a) x = std::tanh(x);
  const Mat q_next = forward(critic_target_, concat_cols(obs2, z2));
  const double ret_min = reward_min / (1.0 - cfg_.gamma);
  const double ret_max = reward_max / (1.0 - cfg_.gamma);
  Vec target(B);
  for (int i = 0; i < B; ++i) {
    const double y = batch[i].reward + cfg_.gamma * q_next.a[i];
    target[i] = std::clamp(y, ret_min, ret_max);
  }

  // Critic step.
  {
    Tape tape;
    const Mat critic_in = concat_cols(obs, act_stored);
    const Mat& q = forward_cached(critic_, critic_in, tape);
    Mat upstream(B, 1);
    double loss = 0.0;
    for (int i = 0; i < B; ++i) {
      const double err = q.a[i] - target[i];
      loss += err * err;
      upstream.a[i] = 2.0 * err / B;
    }
    diag.critic_loss = loss / B;
    if (!std::isfinite(diag.critic_loss))
      throw std::runtime_error("DdpgAgent::update: non-finite critic loss");
    Gradients grads;
    backward(critic_, tape, upstream, grads);
    adam_step(critic_, grads, critic_opt_);
  }

  // Actor step: ascend Q, penalize pre-tanh magnitude, optionally clone
  // expert actions behind the Q-filter.
  {
    Tape actor_tape;
    const Mat& z = forward_cached(actor_, obs, actor_tape);
    Mat a_pi(B, a_dim);
    for (size_t i = 0; i < z.a.size(); ++i) a_pi.a[i] = std::tanh(z.a[i]);

    Tape critic_tape;
    const Mat& q_pi = forward_cached(critic_, concat_cols(obs, a_pi), critic_tape);

    Mat upstream(B, 1);
    upstream.fill(-1.0 / B);
    Gradients critic_scratch;  // critic parameter grads are discarded here
    const Mat input_grads = backward(critic_, critic_tape, upstream, critic_scratch);

    double q_sum = 0.0;
    for (int i = 0; i < B; ++i) q_sum += q_pi.a[i];
    diag.mean_q = q_sum / B;

    double penalty = 0.0;
    Mat dz(B, a_dim);
    const int od = obs.cols;
    for (int i = 0; i < B; ++i) {
      for (int j = 0; j < a_dim; ++j) {
        const double zij = z(i, j);
        const double aij = a_pi(i, j);
        const double dq_da = input_grads(i, od + j);
        dz(i, j) = dq_da * (1.0 - aij * aij) +
                   2.0 * cfg_.action_penalty * zij / (static_cast<double>(B) * a_dim);
        penalty += zij * zij;
      }
    }
    penalty = cfg_.action_penalty * penalty / (static_cast<double>(B) * a_dim);

    double bc_loss = 0.0;
    if (cfg_.behavior_cloning) {
      Mat q_demo;
      if (cfg_.q_filter) q_demo = forward(critic_, concat_cols(obs, act_stored));
      std::vector<int> rows;
      for (int i = 0; i < B; ++i) {
        if (!batch[i].is_expert) continue;
        // Q-filter: clone only where the critic ranks the demo action at
        // least as high as the actor's own.
        if (cfg_.q_filter && q_demo.a[i] < q_pi.a[i]) continue;
        rows.push_back(i);
      }
      if (!rows.empty()) {
        const double w = 2.0 * cfg_.bc_weight / (static_cast<double>(rows.size()) * a_dim);
        for (int i : rows) {
          for (int j = 0; j < a_dim; ++j) {
            const double diff = a_pi(i, j) - act_stored(i, j);
            bc_loss += diff * diff;
            dz(i, j) += w * diff * (1.0 - a_pi(i, j) * a_pi(i, j));
          }
        }
        bc_loss = cfg_.bc_weight * bc_loss / (static_cast<double>(rows.size()) * a_dim);
        diag.bc_applied = static_cast<int>(rows.size());
      }
    }

    diag.actor_loss = -diag.mean_q + penalty + bc_loss;
    if (!std::isfinite(diag.actor_loss))
      throw std::runtime_error("DdpgAgent::update: non-finite actor loss");
    Gradients grads;
    backward(actor_, actor_tape, dz, grads);
    adam_step(actor_, grads, actor_opt_);
  }

  return diag;
}

void DdpgAgent::soft_update_targets() {
  auto blend = [&](DenseNet& target, const DenseNet& online) {
    for (size_t l = 0; l < online.weights.size(); ++l) {
      for (size_t i = 0; i < online.weights[l].a.size(); ++i)
        target.weights[l].a[i] =
            cfg_.polyak * online.weights[l].a[i] + (1.0 - cfg_.polyak) * target.weights[l].a[i];
      for (size_t i = 0; i < online.biases[l].size(); ++i)
        target.biases[l][i] =
            cfg_.polyak * online.biases[l][i] + (1.0 - cfg_.polyak) * target.biases[l][i];
    }
  };
  blend(actor_target_, actor_);
  blend(critic_target_, critic_);
}

void DdpgAgent::restore(DenseNet actor, DenseNet critic, DenseNet actor_target,
                        DenseNet critic_target, AdamState actor_opt, AdamState critic_opt,
                        RunningNormalizer obs_norm, RunningNormalizer goal_norm) {
  actor.check_dims();
  critic.check_dims();
  actor.check_finite();
  critic.check_finite();
  actor_ = std::move(actor);
  critic_ = std::move(critic);
  actor_target_ = std::move(actor_target);
  critic_target_ = std::move(critic_target);
  actor_opt_ = std::move(actor_opt);
  critic_opt_ = std::move(critic_opt);
  obs_norm_ = std::move(obs_norm);
  goal_norm_ = std::move(goal_norm);
}

}  // namespace sagail
