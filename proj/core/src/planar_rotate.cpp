#include <algorithm>
#include <cmath>

#include "envs_impl.hpp"

namespace sagail {

PlanarRotateEnv::PlanarRotateEnv(const PlanarRotateParams& p) : p_(p) {
  spec_.id = "planarrotate";
  spec_.state_dim = 3;  // cos(theta), sin(theta), omega / max_speed
  spec_.action_dim = 1;
  spec_.horizon = p.horizon;
  spec_.goal = GoalSpace{1, GoalMetric::angular, p.tolerance, M_PI};
  spec_.goal_feat = GoalFeaturization::angle_cos_sin;
  sync_state();
  desired_goal_ = {0.0};
}

void PlanarRotateEnv::sync_state() {
  state_ = {std::cos(theta_), std::sin(theta_), omega_ / p_.max_speed};
}

void PlanarRotateEnv::reset(Rng& rng) {
  theta_ = rng.uniform(-M_PI, M_PI);
  omega_ = 0.0;
  Vec goal = sample_goal(rng);
  sync_state();
  begin_episode(state_, std::move(goal));
}

Vec PlanarRotateEnv::sample_goal(Rng& rng) const { return {rng.uniform(-M_PI, M_PI)}; }

Vec PlanarRotateEnv::sample_easy_goal(const Vec& g_init, Rng& rng) const {
  const double d = rng.uniform(0.0, M_PI / 4.0);
  const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
  return {wrap_angle(g_init[0] + sign * d)};
}

void PlanarRotateEnv::apply_action(const Vec& a) {
  omega_ += (a[0] * p_.torque_scale - p_.damping * omega_) * p_.dt;
  omega_ = std::clamp(omega_, -p_.max_speed, p_.max_speed);
  theta_ = wrap_angle(theta_ + omega_ * p_.dt);
  sync_state();
}

}  // namespace sagail
