#include "sagail/config.hpp"

#include <fstream>

#include "json_codecs.hpp"

namespace sagail {

using nlohmann::json;

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::her: return "her";
    case Algo::ddpgfd_her: return "ddpgfd_her";
    case Algo::goal_gail: return "goal_gail";
    case Algo::goal_sagail: return "goal_sagail";
  }
  throw std::logic_error("algo_name: bad enum");
}

Algo algo_from_name(const std::string& name) {
  if (name == "her") return Algo::her;
  if (name == "ddpgfd_her") return Algo::ddpgfd_her;
  if (name == "goal_gail") return Algo::goal_gail;
  if (name == "goal_sagail") return Algo::goal_sagail;
  throw config_error("unknown algorithm: " + name +
                     " (expected her|ddpgfd_her|goal_gail|goal_sagail)");
}

bool algo_uses_demos(Algo a) { return a != Algo::her; }
bool algo_uses_discriminator(Algo a) { return a == Algo::goal_gail || a == Algo::goal_sagail; }
bool algo_uses_admission(Algo a) { return a == Algo::goal_sagail; }

double default_c_comb(const EnvSpec& spec) {
  if (spec.id.rfind("bitflip", 0) == 0) return 1.0;
  if (spec.goal.metric == GoalMetric::angular) return 0.25;
  return 0.05 * spec.goal.max_distance;
}

TrainConfig preset_config(const std::string& preset, const std::string& env_id, Algo algo) {
  TrainConfig cfg;
  cfg.env_id = env_id;
  cfg.algo = algo;
  if (preset == "desk") {
    cfg.cycles_per_epoch = 10;
    cfg.episodes_per_cycle = 16;
    cfg.policy_batches_per_cycle = 40;
    cfg.policy_batch_size = 256;
    cfg.eval_episodes = 100;
    cfg.ddpg.hidden = {64, 64};
    cfg.gail.hidden = {64, 64};
    cfg.gail.batches_per_cycle = 40;
    cfg.gail.batch_size = 128;
    if (env_id.rfind("bitflip", 0) == 0) cfg.epochs = 10;
    else if (env_id == "pointpush2d") cfg.epochs = 25;
    else if (env_id == "planarrotate") cfg.epochs = 20;
    else cfg.epochs = 20;
  } else if (preset == "paper") {
    cfg.epochs = 50;
    cfg.cycles_per_epoch = 50;
    cfg.episodes_per_cycle = 40;
    cfg.policy_batches_per_cycle = 40;
    cfg.policy_batch_size = 5120;
    cfg.eval_episodes = 100;
    cfg.ddpg.hidden = {256, 256, 256, 256};
    cfg.gail.hidden = {256, 256, 256, 256};
    cfg.gail.batches_per_cycle = 40;
    cfg.gail.batch_size = 512;
  } else {
    throw config_error("unknown preset: " + preset + " (expected desk|paper)");
  }
  if (algo == Algo::ddpgfd_her) cfg.demo_sampling = DemoSampling::ratio;
  return cfg;
}

namespace {

std::string sampling_name(DemoSampling s) {
  return s == DemoSampling::union_uniform ? "union" : "ratio";
}

DemoSampling sampling_from_name(const std::string& name) {
  if (name == "union") return DemoSampling::union_uniform;
  if (name == "ratio") return DemoSampling::ratio;
  throw config_error("unknown demo_sampling: " + name + " (expected union|ratio)");
}

}  // namespace

std::string train_config_to_json_text(const TrainConfig& cfg) {
  json j;
  j["env"] = json{{"id", cfg.env_id}, {"params", cfg.env_params}};
  j["algo"] = algo_name(cfg.algo);
  j["epochs"] = cfg.epochs;
  j["cycles_per_epoch"] = cfg.cycles_per_epoch;
  j["episodes_per_cycle"] = cfg.episodes_per_cycle;
  j["policy_batches_per_cycle"] = cfg.policy_batches_per_cycle;
  j["policy_batch_size"] = cfg.policy_batch_size;
  j["eval_episodes"] = cfg.eval_episodes;
  j["seeds"] = cfg.seeds;
  j["demo_path"] = cfg.demo_path;
  j["demo_sampling"] = sampling_name(cfg.demo_sampling);
  j["demo_ratio_initial"] = cfg.demo_ratio_initial;
  j["demo_ratio_anneal_fraction"] = cfg.demo_ratio_anneal_fraction;
  j["agent_buffer_capacity"] = cfg.agent_buffer_capacity;
  j["expert_capacity_multiple"] = cfg.expert_capacity_multiple;
  j["her"] = json{{"replay_k", cfg.her.replay_k}};
  j["ddpg"] = codecs::ddpg_config_to_json(cfg.ddpg);
  j["gail"] = codecs::gail_config_to_json(cfg.gail);
  j["c_comb"] = cfg.c_comb;
  j["require_success"] = cfg.require_success;
  j["out_dir"] = cfg.out_dir;
  j["run_name"] = cfg.run_name;
  j["checkpoint_every_epochs"] = cfg.checkpoint_every_epochs;
  j["log_progress"] = cfg.log_progress;
  return j.dump(2);
}

TrainConfig train_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config: JSON parse error: ") + e.what());
  }
  try {
    TrainConfig cfg;
    if (j.contains("env")) {
      cfg.env_id = j["env"].value("id", cfg.env_id);
      if (j["env"].contains("params"))
        cfg.env_params = j["env"]["params"].get<EnvParams>();
    }
    if (j.contains("algo")) cfg.algo = algo_from_name(j["algo"].get<std::string>());
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.cycles_per_epoch = j.value("cycles_per_epoch", cfg.cycles_per_epoch);
    cfg.episodes_per_cycle = j.value("episodes_per_cycle", cfg.episodes_per_cycle);
    cfg.policy_batches_per_cycle = j.value("policy_batches_per_cycle", cfg.policy_batches_per_cycle);
    cfg.policy_batch_size = j.value("policy_batch_size", cfg.policy_batch_size);
    cfg.eval_episodes = j.value("eval_episodes", cfg.eval_episodes);
    cfg.seeds = j.value("seeds", cfg.seeds);
    cfg.demo_path = j.value("demo_path", cfg.demo_path);
    if (j.contains("demo_sampling"))
      cfg.demo_sampling = sampling_from_name(j["demo_sampling"].get<std::string>());
    cfg.demo_ratio_initial = j.value("demo_ratio_initial", cfg.demo_ratio_initial);
    cfg.demo_ratio_anneal_fraction =
        j.value("demo_ratio_anneal_fraction", cfg.demo_ratio_anneal_fraction);
    cfg.agent_buffer_capacity = j.value("agent_buffer_capacity", cfg.agent_buffer_capacity);
    cfg.expert_capacity_multiple = j.value("expert_capacity_multiple", cfg.expert_capacity_multiple);
    if (j.contains("her")) cfg.her.replay_k = j["her"].value("replay_k", cfg.her.replay_k);
    if (j.contains("ddpg")) cfg.ddpg = codecs::ddpg_config_from_json(j["ddpg"]);
    if (j.contains("gail")) cfg.gail = codecs::gail_config_from_json(j["gail"]);
    cfg.c_comb = j.value("c_comb", cfg.c_comb);
    cfg.require_success = j.value("require_success", cfg.require_success);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.run_name = j.value("run_name", cfg.run_name);
    cfg.checkpoint_every_epochs = j.value("checkpoint_every_epochs", cfg.checkpoint_every_epochs);
    cfg.log_progress = j.value("log_progress", cfg.log_progress);
    return cfg;
  } catch (const json::exception& e) {
    throw config_error(std::string("config: bad field: ") + e.what());
  }
}

TrainConfig load_train_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return train_config_from_json_text(text);
}

void save_train_config(const TrainConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("config: cannot open " + path + " for writing");
  out << train_config_to_json_text(cfg) << '\n';
}

void validate_config(const TrainConfig& cfg) {
  if (cfg.epochs < 0) throw config_error("config: epochs must be >= 0");
  if (cfg.cycles_per_epoch < 1) throw config_error("config: cycles_per_epoch must be >= 1");
  if (cfg.episodes_per_cycle < 1) throw config_error("config: episodes_per_cycle must be >= 1");
  if (cfg.policy_batches_per_cycle < 0)
    throw config_error("config: policy_batches_per_cycle must be >= 0");
  if (cfg.policy_batch_size < 1) throw config_error("config: policy_batch_size must be >= 1");
  if (cfg.eval_episodes < 1) throw config_error("config: eval_episodes must be >= 1");
  if (cfg.seeds.empty()) throw config_error("config: at least one seed required");
  if (cfg.her.replay_k < 0) throw config_error("config: her.replay_k must be >= 0");
  if (cfg.ddpg.gamma <= 0.0 || cfg.ddpg.gamma >= 1.0)
    throw config_error("config: ddpg.gamma must lie in (0,1)");
  if (cfg.ddpg.polyak <= 0.0 || cfg.ddpg.polyak > 1.0)
    throw config_error("config: ddpg.polyak must lie in (0,1]");
  if (cfg.demo_ratio_initial < 0.0 || cfg.demo_ratio_initial > 1.0)
    throw config_error("config: demo_ratio_initial must lie in [0,1]");
  if (cfg.gail.schedule.initial < 0.0 || cfg.gail.schedule.initial > 1.0)
    throw config_error("config: gail.delta_initial must lie in [0,1]");
  if (cfg.c_comb < 0.0) throw config_error("config: c_comb must be >= 0 (0 = per-env default)");

  // Algorithm/feature consistency.
  if (algo_uses_demos(cfg.algo) && cfg.demo_path.empty())
    throw config_error("config: algorithm " + algo_name(cfg.algo) + " requires demo_path");
  if (!algo_uses_demos(cfg.algo) && !cfg.demo_path.empty())
    throw config_error("config: algorithm her takes no demonstrations, but demo_path is set");
  if (cfg.ddpg.behavior_cloning && cfg.algo != Algo::ddpgfd_her)
    throw config_error("config: behavior_cloning is reserved for algo ddpgfd_her");
}

}  // namespace sagail
