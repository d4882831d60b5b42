#include <doctest.h>

#include <cmath>

#include "sagail/her.hpp"

using namespace sagail;

namespace {

EnvSpec bit_spec(int n, int horizon) {
  EnvSpec s;
  s.id = "bitflip" + std::to_string(n);
  s.state_dim = n;
  s.action_dim = n;
  s.horizon = horizon;
  s.goal = GoalSpace{n, GoalMetric::euclidean, 0.5, std::sqrt(static_cast<double>(n))};
  return s;
}

Trajectory bit_traj(const EnvSpec& spec, const std::vector<Vec>& achieved, const Vec& desired) {
  Trajectory t;
  t.desired_goal = desired;
  t.achieved = achieved;
  for (const Vec& g : achieved) t.states.push_back(g);
  for (int i = 0; i < spec.horizon; ++i) {
    t.actions.push_back(Vec(spec.action_dim, -1.0));
    t.rewards.push_back(sparse_reward(spec.goal, t.achieved[i + 1], desired));
  }
  t.episode_return = t.recompute_return();
  return t;
}

std::vector<BatchItem> items_of(const Trajectory& traj) {
  std::vector<BatchItem> batch;
  for (int t = 0; t < traj.horizon(); ++t) {
    BatchItem it;
    it.traj = &traj;
    it.t = t;
    it.desired_goal = traj.desired_goal;
    it.reward = traj.rewards[t];
    batch.push_back(it);
  }
  return batch;
}

}  // namespace

TEST_CASE("relabel: substitute equal to own next achieved goal gives reward 0") {
  const EnvSpec spec = bit_spec(4, 2);
  // achieved: 0000 -> 1000 -> 1000; the only future of t=0 is t'=1, whose
  // achieved goal equals t=0's next achieved goal.
  const Trajectory traj =
      bit_traj(spec, {{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}}, {1, 1, 1, 1});
  auto batch = items_of(traj);
  Rng rng(3);
  RelabelConfig cfg{/*replay_k=*/1e9};  // select everything
  relabel(batch, spec.goal, cfg, rng);
  REQUIRE(batch[0].relabeled());
  CHECK(batch[0].relabel_source_t == 1);
  CHECK(batch[0].desired_goal == Vec{1, 0, 0, 0});
  CHECK(batch[0].reward == 0.0);
}

TEST_CASE("relabel: replay_k = 0 leaves the batch unchanged") {
  const EnvSpec spec = bit_spec(4, 3);
  const Trajectory traj =
      bit_traj(spec, {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 1, 0}, {0, 1, 1, 0}}, {1, 1, 1, 1});
  auto batch = items_of(traj);
  Rng rng(5);
  const RelabelStats stats = relabel(batch, spec.goal, RelabelConfig{0.0}, rng);
  CHECK(stats.selected == 0);
  CHECK(stats.relabeled == 0);
  for (size_t i = 0; i < batch.size(); ++i) {
    CHECK(!batch[i].relabeled());
    CHECK(batch[i].desired_goal == traj.desired_goal);
    CHECK(batch[i].reward == traj.rewards[i]);
  }
}

TEST_CASE("relabel: bitflip episodes match the hand Hamming rule") {
  const EnvSpec spec = bit_spec(4, 8);
  Rng gen(11);
  Rng rng(13);
  RelabelConfig cfg{4.0};
  for (int round = 0; round < 200; ++round) {
    // Random walk over bit strings.
    std::vector<Vec> achieved;
    Vec bits(4, 0.0);
    for (double& b : bits) b = gen.bernoulli(0.5) ? 1.0 : 0.0;
    achieved.push_back(bits);
    for (int t = 0; t < spec.horizon; ++t) {
      Vec next = achieved.back();
      if (gen.bernoulli(0.7)) {
        const int i = gen.uniform_int(4);
        next[i] = 1.0 - next[i];
      }
      achieved.push_back(next);
    }
    Vec desired(4);
    for (double& b : desired) b = gen.bernoulli(0.5) ? 1.0 : 0.0;
    const Trajectory traj = bit_traj(spec, achieved, desired);
    auto batch = items_of(traj);
    relabel(batch, spec.goal, cfg, rng);
    for (const BatchItem& it : batch) {
      if (!it.relabeled()) {
        CHECK(it.desired_goal == desired);
        continue;
      }
      // Provenance: the substitute is an achieved goal of a strictly later
      // timestep of the same episode.
      CHECK(it.relabel_source_t > it.t);
      CHECK(it.relabel_source_t < traj.horizon());
      CHECK(it.desired_goal == traj.achieved[it.relabel_source_t]);
      // Hand rule: reward 0 iff the bit strings match exactly.
      int hamming = 0;
      for (int i = 0; i < 4; ++i)
        if (it.next_achieved_goal()[i] != it.desired_goal[i]) ++hamming;
      CHECK(it.reward == (hamming == 0 ? 0.0 : -1.0));
    }
  }
}

TEST_CASE("relabel: final-timestep transitions are left unrelabeled, never an error") {
  const EnvSpec spec = bit_spec(4, 3);
  const Trajectory traj =
      bit_traj(spec, {{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 1, 1, 0}}, {1, 1, 1, 1});
  std::vector<BatchItem> batch;
  BatchItem last;
  last.traj = &traj;
  last.t = traj.horizon() - 1;
  last.desired_goal = traj.desired_goal;
  last.reward = traj.rewards.back();
  for (int i = 0; i < 50; ++i) batch.push_back(last);
  Rng rng(17);
  const RelabelStats stats = relabel(batch, spec.goal, RelabelConfig{1e9}, rng);
  CHECK(stats.selected == 50);
  CHECK(stats.relabeled == 0);
  for (const BatchItem& it : batch) {
    CHECK(!it.relabeled());
    CHECK(it.desired_goal == traj.desired_goal);
  }
}

TEST_CASE("relabel: only desired goal and reward change; rewards stay consistent") {
  const EnvSpec spec = bit_spec(4, 6);
  Rng gen(23), rng(29);
  std::vector<Vec> achieved;
  Vec bits = {0, 0, 0, 0};
  achieved.push_back(bits);
  for (int t = 0; t < spec.horizon; ++t) {
    bits[gen.uniform_int(4)] = gen.bernoulli(0.5) ? 1.0 : 0.0;
    achieved.push_back(bits);
  }
  const Trajectory traj = bit_traj(spec, achieved, {1, 0, 1, 0});
  auto batch = items_of(traj);
  relabel(batch, spec.goal, RelabelConfig{4.0}, rng);
  for (const BatchItem& it : batch) {
    // Referenced episode data is untouched by relabeling.
    CHECK(it.state() == traj.states[it.t]);
    CHECK(it.action() == traj.actions[it.t]);
    CHECK(it.next_state() == traj.states[it.t + 1]);
    CHECK(it.achieved_goal() == traj.achieved[it.t]);
    CHECK(it.next_achieved_goal() == traj.achieved[it.t + 1]);
    // Sparse-reward consistency survives relabeling.
    CHECK(it.reward == sparse_reward(spec.goal, it.next_achieved_goal(), it.desired_goal));
  }
}

TEST_CASE("relabel: selected fraction converges to replay_k/(replay_k+1)") {
  const EnvSpec spec = bit_spec(4, 10);
  const Trajectory traj = bit_traj(
      spec,
      {{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 1, 1, 0}, {1, 1, 1, 1}, {0, 1, 1, 1},
       {0, 0, 1, 1}, {0, 0, 0, 1}, {0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}},
      {1, 0, 1, 0});
  std::vector<BatchItem> batch;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    BatchItem it;
    it.traj = &traj;
    it.t = i % (traj.horizon() - 1);  // exclude the final timestep
    it.desired_goal = traj.desired_goal;
    it.reward = traj.rewards[it.t];
    batch.push_back(it);
  }
  Rng rng(31);
  const RelabelStats stats = relabel(batch, spec.goal, RelabelConfig{4.0}, rng);
  const double frac = static_cast<double>(stats.relabeled) / n;
  const double sigma = std::sqrt(0.8 * 0.2 / n);
  CHECK(frac > 0.8 - 3 * sigma);
  CHECK(frac < 0.8 + 3 * sigma);
}
