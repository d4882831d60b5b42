#include "sagail/gail.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sagail {

std::string reward_mode_name(DiscRewardMode m) {
  switch (m) {
    case DiscRewardMode::raw: return "raw";
    case DiscRewardMode::sigmoid: return "sigmoid";
    case DiscRewardMode::log_sigmoid: return "log_sigmoid";
  }
  throw std::logic_error("reward_mode_name: bad enum");
}

DiscRewardMode reward_mode_from_name(const std::string& name) {
  if (name == "raw") return DiscRewardMode::raw;
  if (name == "sigmoid") return DiscRewardMode::sigmoid;
  if (name == "log_sigmoid") return DiscRewardMode::log_sigmoid;
  throw std::invalid_argument("unknown discriminator reward mode: " + name);
}

double GailWeightSchedule::value(int epoch) const {
  switch (anneal) {
    case GailAnneal::none:
      return initial;
    case GailAnneal::linear_to_zero: {
      if (anneal_horizon_epochs <= 0) return 0.0;
      const double frac = 1.0 - static_cast<double>(epoch) / anneal_horizon_epochs;
      return initial * std::clamp(frac, 0.0, 1.0);
    }
  }
  throw std::logic_error("GailWeightSchedule: bad enum");
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

std::vector<int> layer_stack(int in, const std::vector<int>& hidden) {
  std::vector<int> sizes;
  sizes.push_back(in);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return sizes;
}

}  // namespace

Discriminator::Discriminator(const EnvSpec& spec, const GailConfig& cfg, Rng& rng)
    : spec_(spec), cfg_(cfg) {
  net_ = DenseNet::make(layer_stack(obs_dim(spec) + spec.action_dim, cfg.hidden), Activation::relu,
                        Activation::identity, rng);
  opt_ = AdamState::for_net(net_, cfg.learning_rate);
}

Vec Discriminator::scores(const Mat& inputs) const {
  const Mat out = forward(net_, inputs);
  return Vec(out.a.begin(), out.a.end());
}

double Discriminator::reward(const Vec& state, const Vec& goal, const Vec& action,
                             const RunningNormalizer& obs_norm,
                             const RunningNormalizer& goal_norm) const {
  Vec obs = build_obs_row(state, goal, spec_, obs_norm, goal_norm);
  Mat in(1, static_cast<int>(obs.size()) + spec_.action_dim);
  std::copy(obs.begin(), obs.end(), in.a.begin());
  for (int j = 0; j < spec_.action_dim; ++j)
    in.a[obs.size() + j] = action[j] / spec_.action_bound;
  const double raw = scores(in)[0];
  switch (cfg_.reward_mode) {
    case DiscRewardMode::raw: {
      const double clipped = std::clamp(raw, -cfg_.reward_clip, cfg_.reward_clip);
      if (clipped != raw) ++clip_events_;
      return clipped;
    }
    case DiscRewardMode::sigmoid:
      return sigmoid(raw);
    case DiscRewardMode::log_sigmoid:
      return std::log(clamp_prob(sigmoid(raw)));
  }
  throw std::logic_error("Discriminator::reward: bad enum");
}

Vec Discriminator::rewards(const std::vector<BatchItem>& batch, const RunningNormalizer& obs_norm,
                           const RunningNormalizer& goal_norm) const {
  const Mat obs = build_obs(batch, spec_, obs_norm, goal_norm, /*next_state=*/false);
  const Mat act = build_actions(batch, spec_);
  const Vec raw = scores(concat_cols(obs, act));
  Vec out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    switch (cfg_.reward_mode) {
      case DiscRewardMode::raw: {
        out[i] = std::clamp(raw[i], -cfg_.reward_clip, cfg_.reward_clip);
        if (out[i] != raw[i]) ++clip_events_;
        break;
      }
      case DiscRewardMode::sigmoid:
        out[i] = sigmoid(raw[i]);
        break;
      case DiscRewardMode::log_sigmoid:
        out[i] = std::log(clamp_prob(sigmoid(raw[i])));
        break;
    }
  }
  return out;
}

double discriminator_loss(const Vec& agent_scores, const Vec& expert_scores) {
  if (agent_scores.empty() || expert_scores.empty())
    throw std::invalid_argument("discriminator_loss: empty batch");
  double agent_term = 0.0;
  for (double z : agent_scores) agent_term += std::log(clamp_prob(sigmoid(z)));
  agent_term /= static_cast<double>(agent_scores.size());
  double expert_term = 0.0;
  for (double z : expert_scores) expert_term += std::log(clamp_prob(1.0 - sigmoid(z)));
  expert_term /= static_cast<double>(expert_scores.size());
  return agent_term + expert_term;
}

double discriminator_loss(const Discriminator& disc, const Mat& agent_inputs,
                          const Mat& expert_inputs) {
  return discriminator_loss(disc.scores(agent_inputs), disc.scores(expert_inputs));
}

double Discriminator::train_step(const Mat& agent_inputs, const Mat& expert_inputs) {
  if (agent_inputs.rows == 0 || expert_inputs.rows == 0)
    throw std::invalid_argument("Discriminator::train_step: empty batch");

  Tape agent_tape, expert_tape;
  const Mat& agent_out = forward_cached(net_, agent_inputs, agent_tape);
  const Mat& expert_out = forward_cached(net_, expert_inputs, expert_tape);

  const int na = agent_inputs.rows;
  const int ne = expert_inputs.rows;

  // d/dz log(sigmoid(z)) = 1 - sigmoid(z); d/dz log(1 - sigmoid(z)) = -sigmoid(z).
  // Gradient is zero where the probability clamp is active.
  Mat agent_up(na, 1), expert_up(ne, 1);
  double loss = 0.0;
  for (int i = 0; i < na; ++i) {
    const double p = sigmoid(agent_out.a[i]);
    loss += std::log(clamp_prob(p)) / na;
    agent_up.a[i] = (p >= kProbClamp && p <= 1.0 - kProbClamp) ? (1.0 - p) / na : 0.0;
  }
  for (int i = 0; i < ne; ++i) {
    const double p = sigmoid(expert_out.a[i]);
    loss += std::log(clamp_prob(1.0 - p)) / ne;
    expert_up.a[i] = (1.0 - p >= kProbClamp && 1.0 - p <= 1.0 - kProbClamp) ? -p / ne : 0.0;
  }
  if (!std::isfinite(loss)) throw std::runtime_error("Discriminator::train_step: non-finite loss");

  Gradients agent_grads, expert_grads;
  backward(net_, agent_tape, agent_up, agent_grads);
  backward(net_, expert_tape, expert_up, expert_grads);
  agent_grads.add(expert_grads);
  adam_step(net_, agent_grads, opt_);
  return loss;
}

void Discriminator::restore(DenseNet net, AdamState opt) {
  net.check_dims();
  net.check_finite();
  net_ = std::move(net);
  opt_ = std::move(opt);
}

double mix_reward(double r_env, double d_value, double delta_gail) {
  if (delta_gail < 0.0 || delta_gail > 1.0)
    throw std::invalid_argument("mix_reward: delta_gail must lie in [0,1]");
  return (1.0 - delta_gail) * r_env + delta_gail * d_value;
}

void mixed_reward_bounds(double delta_gail, const GailConfig& cfg, double& lo, double& hi) {
  double d_lo = 0.0, d_hi = 0.0;
  switch (cfg.reward_mode) {
    case DiscRewardMode::raw:
      d_lo = -cfg.reward_clip;
      d_hi = cfg.reward_clip;
      break;
    case DiscRewardMode::sigmoid:
      d_lo = 0.0;
      d_hi = 1.0;
      break;
    case DiscRewardMode::log_sigmoid:
      d_lo = std::log(kProbClamp);
      d_hi = 0.0;
      break;
  }
  lo = (1.0 - delta_gail) * -1.0 + delta_gail * d_lo;
  hi = delta_gail * d_hi;
}

DiscTrainStats train_discriminator(Discriminator& disc, const TrajectoryBuffer& agent_buf,
                                   const TrajectoryBuffer& expert_buf, const RelabelConfig& her_cfg,
                                   int batches, int batch_size, const RunningNormalizer& obs_norm,
                                   const RunningNormalizer& goal_norm, Rng& rng) {
  DiscTrainStats stats;
  if (agent_buf.empty() || expert_buf.empty()) {
    stats.skipped_empty_buffer = true;
    return stats;
  }
  const EnvSpec& spec = disc.env_spec();
  double loss_sum = 0.0;
  for (int b = 0; b < batches; ++b) {
    std::vector<BatchItem> expert =
        sample_transitions(nullptr, &expert_buf, batch_size, 1.0, rng);
    std::vector<BatchItem> agent = sample_transitions(&agent_buf, nullptr, batch_size, 0.0, rng);
    relabel(expert, spec.goal, her_cfg, rng);
    relabel(agent, spec.goal, her_cfg, rng);
    const Mat expert_in = concat_cols(build_obs(expert, spec, obs_norm, goal_norm, false),
                                      build_actions(expert, spec));
    const Mat agent_in =
        concat_cols(build_obs(agent, spec, obs_norm, goal_norm, false), build_actions(agent, spec));
    loss_sum += disc.train_step(agent_in, expert_in);
    ++stats.steps;
  }
  stats.mean_loss = stats.steps > 0 ? loss_sum / stats.steps : 0.0;
  return stats;
}

}  // namespace sagail
