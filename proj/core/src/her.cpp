#include "sagail/her.hpp"

#include <stdexcept>

namespace sagail {

RelabelStats relabel(std::vector<BatchItem>& batch, const GoalSpace& space,
                     const RelabelConfig& config, Rng& rng) {
  if (config.replay_k < 0.0) throw std::invalid_argument("relabel: replay_k must be >= 0");
  RelabelStats stats;
  const double p = config.relabel_fraction();
  for (BatchItem& item : batch) {
    if (p <= 0.0 || !rng.bernoulli(p)) continue;
    ++stats.selected;
    const int last_t = item.traj->horizon() - 1;
    if (item.t >= last_t) continue;  // final transition: no future, left as-is
    const int future_t = item.t + 1 + rng.uniform_int(last_t - item.t);
    item.desired_goal = item.traj->achieved[future_t];
    item.reward = sparse_reward(space, item.next_achieved_goal(), item.desired_goal);
    item.relabel_source_t = future_t;
    ++stats.relabeled;
  }
  return stats;
}

}  // namespace sagail
