#include <algorithm>
#include <cmath>

#include "envs_impl.hpp"

namespace sagail {

namespace {
double clampd(double x, double lo, double hi) { return std::clamp(x, lo, hi); }
}  // namespace

PointPushEnv::PointPushEnv(const PointPushParams& p) : p_(p) {
  spec_.id = "pointpush2d";
  spec_.state_dim = 6;  // agent xy, object xy, object-agent offset
  spec_.action_dim = 2;
  spec_.horizon = p.horizon;
  const double span = p.goal_hi - p.goal_lo;
  spec_.goal = GoalSpace{2, GoalMetric::euclidean, p.tolerance, span * std::sqrt(2.0)};
  spec_.goal_feat = GoalFeaturization::identity;
  sync_state();
  desired_goal_ = {0.0, 0.0};
}

void PointPushEnv::sync_state() {
  state_ = {agent_[0], agent_[1], object_[0], object_[1], object_[0] - agent_[0],
            object_[1] - agent_[1]};
}

Vec PointPushEnv::achieved_goal() const { return object_; }

void PointPushEnv::reset(Rng& rng) {
  agent_ = {rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};
  object_ = {rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
  // Keep the agent from starting inside the object.
  const double dx = object_[0] - agent_[0], dy = object_[1] - agent_[1];
  if (std::hypot(dx, dy) < p_.contact_radius) agent_[0] = clampd(agent_[0] - 2.0 * p_.contact_radius, 0.0, 1.0);
  Vec goal = sample_goal(rng);
  sync_state();
  begin_episode(state_, std::move(goal));
}

Vec PointPushEnv::sample_goal(Rng& rng) const {
  return {rng.uniform(p_.goal_lo, p_.goal_hi), rng.uniform(p_.goal_lo, p_.goal_hi)};
}

Vec PointPushEnv::sample_easy_goal(const Vec& g_init, Rng& rng) const {
  const double quartile = spec_.goal.max_distance / 4.0;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double d = rng.uniform(0.0, quartile);
    const double phi = rng.uniform(-M_PI, M_PI);
    Vec g = {g_init[0] + d * std::cos(phi), g_init[1] + d * std::sin(phi)};
    if (g[0] >= p_.goal_lo && g[0] <= p_.goal_hi && g[1] >= p_.goal_lo && g[1] <= p_.goal_hi) return g;
  }
  return {clampd(g_init[0], p_.goal_lo, p_.goal_hi), clampd(g_init[1], p_.goal_lo, p_.goal_hi)};
}

void PointPushEnv::apply_action(const Vec& a) {
  agent_[0] = clampd(agent_[0] + a[0] * p_.max_step, 0.0, 1.0);
  agent_[1] = clampd(agent_[1] + a[1] * p_.max_step, 0.0, 1.0);
  const double dx = object_[0] - agent_[0];
  const double dy = object_[1] - agent_[1];
  const double dist = std::hypot(dx, dy);
  if (dist < p_.contact_radius) {
    double ux = 1.0, uy = 0.0;
    if (dist > 1e-12) {
      ux = dx / dist;
      uy = dy / dist;
    }
    object_[0] = clampd(agent_[0] + ux * p_.contact_radius, p_.object_lo, p_.object_hi);
    object_[1] = clampd(agent_[1] + uy * p_.contact_radius, p_.object_lo, p_.object_hi);
  }
  sync_state();
}

}  // namespace sagail
