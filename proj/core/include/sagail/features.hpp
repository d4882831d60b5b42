#pragma once

#include <vector>

#include "sagail/env.hpp"
#include "sagail/normalizer.hpp"
#include "sagail/replay.hpp"

namespace sagail {

// Network input assembly shared by the actor, critic, and discriminator:
// [normalized state | normalized goal features] and, where an action is
// part of the input, the stored action scaled to [-1, 1].

int obs_dim(const EnvSpec& spec);

// One row per batch item; uses the item's current (possibly relabeled) goal.
Mat build_obs(const std::vector<BatchItem>& items, const EnvSpec& spec,
              const RunningNormalizer& obs_norm, const RunningNormalizer& goal_norm,
              bool next_state);

Vec build_obs_row(const Vec& state, const Vec& goal, const EnvSpec& spec,
                  const RunningNormalizer& obs_norm, const RunningNormalizer& goal_norm);

// Stored actions scaled by 1/action_bound.
Mat build_actions(const std::vector<BatchItem>& items, const EnvSpec& spec);

// [obs | action] concatenation for critic/discriminator inputs.
Mat concat_cols(const Mat& a, const Mat& b);

}  // namespace sagail
