#pragma once

#include <vector>

#include "sagail/replay.hpp"

namespace sagail {

// Future-strategy hindsight relabeling. A transition is selected with
// probability replay_k / (replay_k + 1); its desired goal is then replaced
// by the achieved goal of a uniformly chosen strictly later transition of
// the same episode and the reward is recomputed against the substitute.
struct RelabelConfig {
  double replay_k = 4.0;  // k=4 -> 80% of sampled transitions relabeled

  double relabel_fraction() const { return replay_k / (replay_k + 1.0); }
};

struct RelabelStats {
  int selected = 0;   // passed the probability draw
  int relabeled = 0;  // actually rewritten (had a future timestep)
};

RelabelStats relabel(std::vector<BatchItem>& batch, const GoalSpace& space,
                     const RelabelConfig& config, Rng& rng);

}  // namespace sagail
