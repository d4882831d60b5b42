#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "sagail/env.hpp"
#include "sagail/goal_space.hpp"
#include "sagail/mat.hpp"
#include "sagail/rng.hpp"

namespace sagail {

// (initial achieved goal, desired goal): the difficulty signature of an
// episode. Two trajectories with nearby goal-pairs pose comparable tasks.
struct GoalPair {
  Vec g_init;
  Vec g_d;
};

enum class TrajectorySource { demo_seed, self_admitted, agent };

std::string source_name(TrajectorySource s);
TrajectorySource source_from_name(const std::string& name);

// One fixed-horizon episode. states/achieved have horizon+1 entries
// (indices 0..T), actions/rewards have horizon entries. The return is
// cached at construction and revalidated on buffer insertion.
struct Trajectory {
  std::vector<Vec> states;
  std::vector<Vec> actions;
  std::vector<Vec> achieved;
  Vec desired_goal;
  Vec rewards;
  double episode_return = 0.0;
  TrajectorySource source = TrajectorySource::agent;

  int horizon() const { return static_cast<int>(actions.size()); }
  GoalPair goal_pair() const { return {achieved.front(), desired_goal}; }
  double recompute_return() const;
  bool achieved_ever() const;      // reward 0 at any timestep
  bool achieved_at_final() const;  // reward 0 at the last timestep
};

// Throws if shapes, reward consistency, or the cached return are off.
void validate_trajectory(const Trajectory& t, const EnvSpec& spec);

// One timestep tuple materialized out of a trajectory.
struct Transition {
  Vec state, action, next_state;
  Vec achieved_goal, next_achieved_goal, desired_goal;
  double reward = -1.0;
  bool is_expert = false;
};

// A sampled transition that keeps hold of its source episode, so hindsight
// relabeling can reach the future achieved goals. desired_goal/reward start
// as the stored values and are what relabeling rewrites.
struct BatchItem {
  const Trajectory* traj = nullptr;
  int t = 0;
  Vec desired_goal;
  double reward = -1.0;
  bool is_expert = false;
  int relabel_source_t = -1;  // timestep the substitute goal came from, -1 if none

  const Vec& state() const { return traj->states[t]; }
  const Vec& action() const { return traj->actions[t]; }
  const Vec& next_state() const { return traj->states[t + 1]; }
  const Vec& achieved_goal() const { return traj->achieved[t]; }
  const Vec& next_achieved_goal() const { return traj->achieved[t + 1]; }
  bool relabeled() const { return relabel_source_t >= 0; }
  Transition materialize() const;
};

// FIFO-capped trajectory store. Used both for the expert buffer R_E and the
// agent buffer R_B; insertion past capacity evicts the oldest episode.
class TrajectoryBuffer {
 public:
  TrajectoryBuffer(size_t capacity, EnvSpec spec);

  // Validates and inserts; returns the evicted trajectory if the cap was hit.
  std::optional<Trajectory> push(Trajectory t);

  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  size_t capacity() const { return capacity_; }
  size_t transition_count() const;
  std::uint64_t total_pushed() const { return total_pushed_; }

  // Index 0 is the oldest stored trajectory.
  const Trajectory& operator[](size_t i) const { return items_[i]; }

  const EnvSpec& spec() const { return spec_; }

  // Mean d(g_init, g_d) over stored trajectories; NaN when empty.
  double mean_goal_pair_distance() const;

 private:
  size_t capacity_;
  EnvSpec spec_;
  std::deque<Trajectory> items_;
  std::uint64_t total_pushed_ = 0;
};

// Samples a batch from the union of the two buffers. Exactly
// floor(demo_ratio * batch_size) items come from the expert buffer, the rest
// from the agent buffer; within each buffer, (trajectory, timestep) pairs
// are drawn uniformly. A nonzero share against an empty buffer throws.
std::vector<BatchItem> sample_transitions(const TrajectoryBuffer* agent_buf,
                                          const TrajectoryBuffer* expert_buf, int batch_size,
                                          double demo_ratio, Rng& rng);

// demo_ratio that makes union sampling uniform over all stored transitions.
double union_demo_ratio(const TrajectoryBuffer* agent_buf, const TrajectoryBuffer* expert_buf);

// Runs one full episode on an already-reset environment, pulling actions
// from the callback, and assembles the trajectory.
template <typename Policy>
Trajectory run_episode(Env& env, Policy&& policy) {
  Trajectory traj;
  const int T = env.spec().horizon;
  traj.states.reserve(T + 1);
  traj.achieved.reserve(T + 1);
  traj.actions.reserve(T);
  traj.rewards.reserve(T);
  traj.states.push_back(env.state());
  traj.achieved.push_back(env.achieved_goal());
  traj.desired_goal = env.desired_goal();
  for (int t = 0; t < T; ++t) {
    Vec a = policy(env);
    EnvStep s = env.step(a);
    traj.actions.push_back(std::move(a));
    traj.states.push_back(s.next_state);
    traj.achieved.push_back(s.achieved_goal);
    traj.rewards.push_back(s.reward);
  }
  traj.episode_return = traj.recompute_return();
  return traj;
}

}  // namespace sagail
