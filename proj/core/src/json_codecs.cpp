#include "json_codecs.hpp"

#include <stdexcept>

namespace sagail::codecs {

json net_to_json(const DenseNet& net) {
  json j;
  j["layer_sizes"] = net.layer_sizes;
  j["hidden_act"] = activation_name(net.hidden_act);
  j["output_act"] = activation_name(net.output_act);
  json ws = json::array(), bs = json::array();
  for (const Mat& w : net.weights) ws.push_back(w.a);  // row-major
  for (const Vec& b : net.biases) bs.push_back(b);
  j["weights"] = std::move(ws);
  j["biases"] = std::move(bs);
  return j;
}

DenseNet net_from_json(const json& j) {
  DenseNet net;
  net.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  net.hidden_act = activation_from_name(j.at("hidden_act").get<std::string>());
  net.output_act = activation_from_name(j.at("output_act").get<std::string>());
  const auto& ws = j.at("weights");
  const auto& bs = j.at("biases");
  for (size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
    Mat w(net.layer_sizes[l + 1], net.layer_sizes[l]);
    w.a = ws.at(l).get<Vec>();
    if (w.a.size() != static_cast<size_t>(w.rows) * w.cols)
      throw std::runtime_error("checkpoint: weight size mismatch");
    net.weights.push_back(std::move(w));
    net.biases.push_back(bs.at(l).get<Vec>());
  }
  net.check_dims();
  net.check_finite();
  return net;
}

json adam_to_json(const AdamState& s) {
  return json{{"step_count", s.step_count}, {"learning_rate", s.learning_rate},
              {"beta1", s.beta1},           {"beta2", s.beta2},
              {"epsilon", s.epsilon},       {"m_weights", s.m_weights},
              {"v_weights", s.v_weights},   {"m_biases", s.m_biases},
              {"v_biases", s.v_biases}};
}

AdamState adam_from_json(const json& j) {
  AdamState s;
  s.step_count = j.at("step_count").get<long>();
  s.learning_rate = j.at("learning_rate").get<double>();
  s.beta1 = j.at("beta1").get<double>();
  s.beta2 = j.at("beta2").get<double>();
  s.epsilon = j.at("epsilon").get<double>();
  s.m_weights = j.at("m_weights").get<std::vector<Vec>>();
  s.v_weights = j.at("v_weights").get<std::vector<Vec>>();
  s.m_biases = j.at("m_biases").get<std::vector<Vec>>();
  s.v_biases = j.at("v_biases").get<std::vector<Vec>>();
  return s;
}

json normalizer_to_json(const RunningNormalizer& n) {
  return json{{"dim", n.dim()},     {"clip", n.clip()}, {"enabled", n.enabled()},
              {"count", n.count()}, {"sum", n.sum()},   {"sum_sq", n.sum_sq()}};
}

RunningNormalizer normalizer_from_json(const json& j) {
  RunningNormalizer n(j.at("dim").get<int>(), j.at("clip").get<double>(),
                      j.at("enabled").get<bool>());
  n.restore(j.at("sum").get<Vec>(), j.at("sum_sq").get<Vec>(), j.at("count").get<long>());
  return n;
}

json env_spec_to_json(const EnvSpec& s) {
  return json{{"id", s.id},
              {"state_dim", s.state_dim},
              {"action_dim", s.action_dim},
              {"horizon", s.horizon},
              {"action_bound", s.action_bound},
              {"goal_dim", s.goal.dimension},
              {"goal_metric", metric_name(s.goal.metric)},
              {"goal_tolerance", s.goal.tolerance},
              {"goal_max_distance", s.goal.max_distance},
              {"goal_feat", s.goal_feat == GoalFeaturization::angle_cos_sin ? "angle_cos_sin"
                                                                            : "identity"}};
}

EnvSpec env_spec_from_json(const json& j) {
  EnvSpec s;
  s.id = j.at("id").get<std::string>();
  s.state_dim = j.at("state_dim").get<int>();
  s.action_dim = j.at("action_dim").get<int>();
  s.horizon = j.at("horizon").get<int>();
  s.action_bound = j.at("action_bound").get<double>();
  s.goal.dimension = j.at("goal_dim").get<int>();
  s.goal.metric = metric_from_name(j.at("goal_metric").get<std::string>());
  s.goal.tolerance = j.at("goal_tolerance").get<double>();
  s.goal.max_distance = j.at("goal_max_distance").get<double>();
  s.goal_feat = j.at("goal_feat").get<std::string>() == "angle_cos_sin"
                    ? GoalFeaturization::angle_cos_sin
                    : GoalFeaturization::identity;
  return s;
}

json ddpg_config_to_json(const DdpgConfig& c) {
  return json{{"gamma", c.gamma},
              {"polyak", c.polyak},
              {"actor_lr", c.actor_lr},
              {"critic_lr", c.critic_lr},
              {"noise_scale", c.noise_scale},
              {"epsilon_random", c.epsilon_random},
              {"action_penalty", c.action_penalty},
              {"hidden", c.hidden},
              {"actor_final_scale", c.actor_final_scale},
              {"normalize_inputs", c.normalize_inputs},
              {"normalizer_clip", c.normalizer_clip},
              {"behavior_cloning", c.behavior_cloning},
              {"bc_weight", c.bc_weight},
              {"q_filter", c.q_filter}};
}

DdpgConfig ddpg_config_from_json(const json& j) {
  DdpgConfig c;
  c.gamma = j.value("gamma", c.gamma);
  c.polyak = j.value("polyak", c.polyak);
  c.actor_lr = j.value("actor_lr", c.actor_lr);
  c.critic_lr = j.value("critic_lr", c.critic_lr);
  c.noise_scale = j.value("noise_scale", c.noise_scale);
  c.epsilon_random = j.value("epsilon_random", c.epsilon_random);
  c.action_penalty = j.value("action_penalty", c.action_penalty);
  c.hidden = j.value("hidden", c.hidden);
  c.actor_final_scale = j.value("actor_final_scale", c.actor_final_scale);
  c.normalize_inputs = j.value("normalize_inputs", c.normalize_inputs);
  c.normalizer_clip = j.value("normalizer_clip", c.normalizer_clip);
  c.behavior_cloning = j.value("behavior_cloning", c.behavior_cloning);
  c.bc_weight = j.value("bc_weight", c.bc_weight);
  c.q_filter = j.value("q_filter", c.q_filter);
  return c;
}

json gail_config_to_json(const GailConfig& c) {
  return json{{"hidden", c.hidden},
              {"learning_rate", c.learning_rate},
              {"reward_mode", reward_mode_name(c.reward_mode)},
              {"reward_clip", c.reward_clip},
              {"delta_initial", c.schedule.initial},
              {"delta_anneal", c.schedule.anneal == GailAnneal::none ? "none" : "linear_to_zero"},
              {"anneal_horizon_epochs", c.schedule.anneal_horizon_epochs},
              {"batches_per_cycle", c.batches_per_cycle},
              {"batch_size", c.batch_size}};
}

GailConfig gail_config_from_json(const json& j) {
  GailConfig c;
  c.hidden = j.value("hidden", c.hidden);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  if (j.contains("reward_mode"))
    c.reward_mode = reward_mode_from_name(j.at("reward_mode").get<std::string>());
  c.reward_clip = j.value("reward_clip", c.reward_clip);
  c.schedule.initial = j.value("delta_initial", c.schedule.initial);
  if (j.contains("delta_anneal"))
    c.schedule.anneal = j.at("delta_anneal").get<std::string>() == "none"
                            ? GailAnneal::none
                            : GailAnneal::linear_to_zero;
  c.schedule.anneal_horizon_epochs = j.value("anneal_horizon_epochs", c.schedule.anneal_horizon_epochs);
  c.batches_per_cycle = j.value("batches_per_cycle", c.batches_per_cycle);
  c.batch_size = j.value("batch_size", c.batch_size);
  return c;
}

}  // namespace sagail::codecs
