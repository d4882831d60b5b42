#pragma once

#include <memory>
#include <string>

#include "sagail/ddpg.hpp"
#include "sagail/gail.hpp"

namespace sagail {

inline constexpr int kCheckpointFormatVersion = 1;

// Self-describing training snapshot: network shapes and parameters,
// optimizer state, normalizer statistics, RNG stream state, and epoch
// progress. Structured text; numbers round-trip exactly.
void save_checkpoint(const std::string& path, const std::string& algo, const DdpgAgent& agent,
                     const Discriminator* disc, int epochs_completed, const std::string& rng_state);

struct LoadedCheckpoint {
  std::string algo;
  EnvSpec env_spec;
  int epochs_completed = 0;
  std::string rng_state;
  std::unique_ptr<DdpgAgent> agent;
  std::unique_ptr<Discriminator> disc;  // null when the run had none
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace sagail
