#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "sagail/goal_space.hpp"
#include "sagail/mat.hpp"
#include "sagail/rng.hpp"

namespace sagail {

// How a raw goal vector is expanded before entering a network. Angles go in
// as (cos, sin) so the wrap-around at +-pi does not confuse the nets.
enum class GoalFeaturization { identity, angle_cos_sin };

struct EnvSpec {
  std::string id;
  int state_dim = 0;
  int action_dim = 0;
  GoalSpace goal;
  int horizon = 0;
  double action_bound = 1.0;  // actions live in [-bound, bound]^action_dim
  GoalFeaturization goal_feat = GoalFeaturization::identity;

  int goal_feature_dim() const {
    return goal_feat == GoalFeaturization::angle_cos_sin ? 2 * goal.dimension : goal.dimension;
  }
  bool compatible_with(const EnvSpec& other) const;
};

void goal_features(const EnvSpec& spec, std::span<const double> goal, std::span<double> out);
Vec goal_features(const EnvSpec& spec, const Vec& goal);

struct EnvStep {
  Vec next_state;
  Vec achieved_goal;
  double reward = -1.0;
  bool done = false;
};

// Fixed-horizon multi-goal environment. Episodes never terminate early;
// done is set exactly at t = horizon. reset samples the initial state and a
// desired goal; the desired goal then stays fixed for the episode unless
// explicitly overridden before the first step.
class Env {
 public:
  virtual ~Env() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual void reset(Rng& rng) = 0;
  virtual EnvStep step(const Vec& action) = 0;

  virtual const Vec& state() const = 0;
  virtual Vec achieved_goal() const = 0;
  virtual const Vec& desired_goal() const = 0;
  virtual void set_desired_goal(const Vec& goal) = 0;

  // Uniform draw from the environment's goal distribution.
  virtual Vec sample_goal(Rng& rng) const = 0;
  // Goal in the easiest difficulty quartile relative to g_init (low
  // d(g_init, g)); used by skewed demonstration generation.
  virtual Vec sample_easy_goal(const Vec& g_init, Rng& rng) const = 0;

  virtual std::unique_ptr<Env> clone() const = 0;

  virtual int steps_taken() const = 0;
  bool episode_active() const { return steps_taken() < spec().horizon; }
};

using EnvParams = std::map<std::string, double>;

// ids: "bitflip<N>" (e.g. "bitflip8"), "pointpush2d", "planarrotate".
std::unique_ptr<Env> make_env(const std::string& id, const EnvParams& params = {});

// Shared plumbing: step counting, action clipping, sparse reward.
class EnvBase : public Env {
 public:
  const EnvSpec& spec() const override { return spec_; }
  const Vec& state() const override { return state_; }
  const Vec& desired_goal() const override { return desired_goal_; }
  int steps_taken() const override { return steps_taken_; }

  void set_desired_goal(const Vec& goal) override;
  EnvStep step(const Vec& action) final;

 protected:
  // Dynamics only: mutates state_ given a clipped action.
  virtual void apply_action(const Vec& clipped_action) = 0;

  Vec clip_action(const Vec& action) const;
  void begin_episode(Vec state, Vec goal);

  EnvSpec spec_;
  Vec state_;
  Vec desired_goal_;
  int steps_taken_ = 0;
};

}  // namespace sagail
