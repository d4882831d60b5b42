#include "sagail/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sagail/envs_impl.hpp"

namespace sagail {

bool EnvSpec::compatible_with(const EnvSpec& other) const {
  return id == other.id && state_dim == other.state_dim && action_dim == other.action_dim &&
         goal.dimension == other.goal.dimension && goal.metric == other.goal.metric &&
         goal.tolerance == other.goal.tolerance && horizon == other.horizon;
}

void goal_features(const EnvSpec& spec, std::span<const double> goal, std::span<double> out) {
  if (static_cast<int>(goal.size()) != spec.goal.dimension ||
      static_cast<int>(out.size()) != spec.goal_feature_dim())
    throw std::invalid_argument("goal_features: dimension mismatch");
  switch (spec.goal_feat) {
    case GoalFeaturization::identity:
      std::copy(goal.begin(), goal.end(), out.begin());
      return;
    case GoalFeaturization::angle_cos_sin:
      for (int i = 0; i < spec.goal.dimension; ++i) {
        out[2 * i] = std::cos(goal[i]);
        out[2 * i + 1] = std::sin(goal[i]);
      }
      return;
  }
}

Vec goal_features(const EnvSpec& spec, const Vec& goal) {
  Vec out(spec.goal_feature_dim());
  goal_features(spec, goal, out);
  return out;
}

void EnvBase::set_desired_goal(const Vec& goal) {
  if (static_cast<int>(goal.size()) != spec_.goal.dimension)
    throw std::invalid_argument("set_desired_goal: dimension mismatch");
  desired_goal_ = goal;
}

Vec EnvBase::clip_action(const Vec& action) const {
  if (static_cast<int>(action.size()) != spec_.action_dim)
    throw std::invalid_argument("step: action dimension mismatch");
  Vec a = action;
  for (double& x : a) x = std::clamp(x, -spec_.action_bound, spec_.action_bound);
  return a;
}

void EnvBase::begin_episode(Vec state, Vec goal) {
  state_ = std::move(state);
  desired_goal_ = std::move(goal);
  steps_taken_ = 0;
}

EnvStep EnvBase::step(const Vec& action) {
  if (!episode_active())
    throw std::logic_error("Env::step called on a finished episode");
  apply_action(clip_action(action));
  ++steps_taken_;
  EnvStep out;
  out.next_state = state_;
  out.achieved_goal = achieved_goal();
  out.reward = sparse_reward(spec_.goal, out.achieved_goal, desired_goal_);
  out.done = steps_taken_ >= spec_.horizon;
  return out;
}

namespace {

double param_or(const EnvParams& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

std::unique_ptr<Env> make_env(const std::string& id, const EnvParams& params) {
  if (id.rfind("bitflip", 0) == 0) {
    int n = 8;
    if (id.size() > 7) {
      try {
        n = std::stoi(id.substr(7));
      } catch (const std::exception&) {
        throw std::invalid_argument("make_env: bad bitflip id: " + id);
      }
    }
    n = static_cast<int>(param_or(params, "n", n));
    const int horizon = static_cast<int>(param_or(params, "horizon", n));
    return std::make_unique<BitFlipEnv>(n, horizon);
  }
  if (id == "pointpush2d") {
    PointPushParams p;
    p.horizon = static_cast<int>(param_or(params, "horizon", p.horizon));
    p.tolerance = param_or(params, "tolerance", p.tolerance);
    p.max_step = param_or(params, "max_step", p.max_step);
    p.contact_radius = param_or(params, "contact_radius", p.contact_radius);
    return std::make_unique<PointPushEnv>(p);
  }
  if (id == "planarrotate") {
    PlanarRotateParams p;
    p.horizon = static_cast<int>(param_or(params, "horizon", p.horizon));
    p.tolerance = param_or(params, "tolerance", p.tolerance);
    p.dt = param_or(params, "dt", p.dt);
    p.torque_scale = param_or(params, "torque_scale", p.torque_scale);
    p.damping = param_or(params, "damping", p.damping);
    p.max_speed = param_or(params, "max_speed", p.max_speed);
    return std::make_unique<PlanarRotateEnv>(p);
  }
  throw std::invalid_argument("make_env: unknown environment id: " + id);
}

}  // namespace sagail
