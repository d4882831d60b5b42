#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "envs_impl.hpp"

namespace sagail {

BitFlipEnv::BitFlipEnv(int n, int horizon) : n_(n) {
  if (n < 1) throw std::invalid_argument("BitFlipEnv: n must be >= 1");
  spec_.id = "bitflip" + std::to_string(n);
  spec_.state_dim = n;
  spec_.action_dim = n;
  spec_.horizon = horizon;
  spec_.goal = GoalSpace{n, GoalMetric::euclidean, 0.5, std::sqrt(static_cast<double>(n))};
  spec_.goal_feat = GoalFeaturization::identity;
  state_.assign(n, 0.0);
  desired_goal_.assign(n, 0.0);
}

void BitFlipEnv::reset(Rng& rng) {
  Vec init(n_);
  for (double& b : init) b = rng.bernoulli(0.5) ? 1.0 : 0.0;
  begin_episode(std::move(init), sample_goal(rng));
}

Vec BitFlipEnv::sample_goal(Rng& rng) const {
  Vec g(n_);
  for (double& b : g) b = rng.bernoulli(0.5) ? 1.0 : 0.0;
  return g;
}

Vec BitFlipEnv::sample_easy_goal(const Vec& g_init, Rng& rng) const {
  // Easiest quartile by Hamming distance: flip 1..max(1, n/4) distinct bits.
  const int max_flips = std::max(1, n_ / 4);
  const int flips = 1 + rng.uniform_int(max_flips);
  Vec g = g_init;
  std::vector<int> idx(n_);
  for (int i = 0; i < n_; ++i) idx[i] = i;
  for (int f = 0; f < flips; ++f) {
    const int pick = f + rng.uniform_int(n_ - f);
    std::swap(idx[f], idx[pick]);
    g[idx[f]] = 1.0 - g[idx[f]];
  }
  return g;
}

void BitFlipEnv::apply_action(const Vec& a) {
  for (int i = 0; i < n_; ++i)
    if (a[i] > kFlipThreshold) state_[i] = 1.0 - state_[i];
}

}  // namespace sagail
