#include "sagail/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "json_codecs.hpp"

namespace sagail {

using nlohmann::json;
using namespace codecs;

void save_checkpoint(const std::string& path, const std::string& algo, const DdpgAgent& agent,
                     const Discriminator* disc, int epochs_completed,
                     const std::string& rng_state) {
  json j;
  j["format_version"] = kCheckpointFormatVersion;
  j["kind"] = "checkpoint";
  j["algo"] = algo;
  j["env"] = env_spec_to_json(agent.env_spec());
  j["epochs_completed"] = epochs_completed;
  j["rng_state"] = rng_state;
  j["ddpg_config"] = ddpg_config_to_json(agent.config());
  j["agent"] = json{{"actor", net_to_json(agent.actor())},
                    {"critic", net_to_json(agent.critic())},
                    {"actor_target", net_to_json(agent.actor_target())},
                    {"critic_target", net_to_json(agent.critic_target())},
                    {"actor_opt", adam_to_json(agent.actor_opt())},
                    {"critic_opt", adam_to_json(agent.critic_opt())},
                    {"obs_norm", normalizer_to_json(agent.obs_normalizer())},
                    {"goal_norm", normalizer_to_json(agent.goal_normalizer())}};
  if (disc) {
    j["gail_config"] = gail_config_to_json(disc->config());
    j["disc"] = json{{"net", net_to_json(disc->net())}, {"opt", adam_to_json(disc->opt())}};
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << j.dump() << '\n';
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("load_checkpoint: parse error: ") + e.what());
  }
  try {
    if (j.at("kind").get<std::string>() != "checkpoint")
      throw std::runtime_error("not a checkpoint file");
    if (j.at("format_version").get<int>() != kCheckpointFormatVersion)
      throw std::runtime_error("unsupported checkpoint format_version");

    LoadedCheckpoint out;
    out.algo = j.at("algo").get<std::string>();
    out.env_spec = env_spec_from_json(j.at("env"));
    out.epochs_completed = j.at("epochs_completed").get<int>();
    out.rng_state = j.at("rng_state").get<std::string>();

    const DdpgConfig ddpg_cfg = ddpg_config_from_json(j.at("ddpg_config"));
    Rng scratch(0);
    out.agent = std::make_unique<DdpgAgent>(out.env_spec, ddpg_cfg, scratch);
    const json& a = j.at("agent");
    out.agent->restore(net_from_json(a.at("actor")), net_from_json(a.at("critic")),
                       net_from_json(a.at("actor_target")), net_from_json(a.at("critic_target")),
                       adam_from_json(a.at("actor_opt")), adam_from_json(a.at("critic_opt")),
                       normalizer_from_json(a.at("obs_norm")),
                       normalizer_from_json(a.at("goal_norm")));

    if (j.contains("disc")) {
      const GailConfig gail_cfg = gail_config_from_json(j.at("gail_config"));
      out.disc = std::make_unique<Discriminator>(out.env_spec, gail_cfg, scratch);
      out.disc->restore(net_from_json(j.at("disc").at("net")),
                        adam_from_json(j.at("disc").at("opt")));
    }
    return out;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("load_checkpoint: malformed checkpoint: ") + e.what());
  }
}

}  // namespace sagail
