#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sagail/ddpg.hpp"
#include "sagail/env.hpp"
#include "sagail/gail.hpp"
#include "sagail/her.hpp"
#include "sagail/selection.hpp"

namespace sagail {

// Bad user input (config file, CLI flags, mismatched datasets). Maps to
// exit code 1 in the CLI, as opposed to runtime invariant violations (2).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Algo { her, ddpgfd_her, goal_gail, goal_sagail };

std::string algo_name(Algo a);
Algo algo_from_name(const std::string& name);
bool algo_uses_demos(Algo a);
bool algo_uses_discriminator(Algo a);
bool algo_uses_admission(Algo a);

// How policy-update batches draw from R_B vs R_E: uniform over the union
// (ratio implied by buffer sizes) or an explicit ratio annealed from
// demo_ratio_initial to the union ratio.
enum class DemoSampling { union_uniform, ratio };

struct TrainConfig {
  std::string env_id = "bitflip8";
  EnvParams env_params;
  Algo algo = Algo::her;

  int epochs = 10;
  int cycles_per_epoch = 10;
  int episodes_per_cycle = 16;      // M in the per-cycle collection loop
  int policy_batches_per_cycle = 40;  // N
  int policy_batch_size = 256;
  int eval_episodes = 100;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

  std::string demo_path;
  DemoSampling demo_sampling = DemoSampling::union_uniform;
  double demo_ratio_initial = 0.5;
  double demo_ratio_anneal_fraction = 0.5;  // reach the union ratio after this run fraction

  std::size_t agent_buffer_capacity = 10000;
  int expert_capacity_multiple = 20;  // R_E cap = multiple x initial demo count

  RelabelConfig her;
  DdpgConfig ddpg;
  GailConfig gail;
  double c_comb = 0.0;  // 0 = per-environment default
  bool require_success = true;

  std::string out_dir;
  std::string run_name = "run";
  int checkpoint_every_epochs = 1;
  bool log_progress = true;
};

// Per-environment default for the combined-distance threshold.
double default_c_comb(const EnvSpec& spec);

// "desk" fits a laptop budget; "paper" carries the full-scale hyperparameters.
TrainConfig preset_config(const std::string& preset, const std::string& env_id, Algo algo);

TrainConfig train_config_from_json_text(const std::string& text);
TrainConfig load_train_config(const std::string& path);
std::string train_config_to_json_text(const TrainConfig& cfg);
void save_train_config(const TrainConfig& cfg, const std::string& path);

// Structural checks plus algo-feature consistency; throws config_error.
void validate_config(const TrainConfig& cfg);

}  // namespace sagail
