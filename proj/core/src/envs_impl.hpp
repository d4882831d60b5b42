#pragma once

// Concrete desk-scale environments. Internal header: construct through
// make_env; tests may include this directly for white-box checks.

#include "sagail/env.hpp"

namespace sagail {

// n binary switches. Continuous action in [-1,1]^n: switch i toggles when
// action[i] > 0.5, so "all low" is a no-op and the agent can hold a reached
// goal. Goal distance is the euclidean norm of the bit difference
// (sqrt of the Hamming distance) with tolerance 0.5: reward 0 iff exact match.
class BitFlipEnv final : public EnvBase {
 public:
  BitFlipEnv(int n, int horizon);

  void reset(Rng& rng) override;
  Vec achieved_goal() const override { return state_; }
  Vec sample_goal(Rng& rng) const override;
  Vec sample_easy_goal(const Vec& g_init, Rng& rng) const override;
  std::unique_ptr<Env> clone() const override { return std::make_unique<BitFlipEnv>(*this); }

  static constexpr double kFlipThreshold = 0.5;

 protected:
  void apply_action(const Vec& a) override;

 private:
  int n_;
};

struct PointPushParams {
  int horizon = 50;
  double tolerance = 0.05;
  double max_step = 0.05;        // largest agent displacement per step
  double contact_radius = 0.06;  // agent-center to object-center push distance
  double goal_lo = 0.15, goal_hi = 0.85;
  double object_lo = 0.05, object_hi = 0.95;  // walls for the pushed object
};

// Point agent pushes a disk across the unit square to a 2D target. The push
// model is kinematic non-penetration: if a move would leave the agent within
// the contact radius, the object is displaced outward along the center line.
class PointPushEnv final : public EnvBase {
 public:
  explicit PointPushEnv(const PointPushParams& p);

  void reset(Rng& rng) override;
  Vec achieved_goal() const override;
  Vec sample_goal(Rng& rng) const override;
  Vec sample_easy_goal(const Vec& g_init, Rng& rng) const override;
  std::unique_ptr<Env> clone() const override { return std::make_unique<PointPushEnv>(*this); }

  const PointPushParams& params() const { return p_; }
  // agent position; object position is the achieved goal
  double agent_x() const { return agent_[0]; }
  double agent_y() const { return agent_[1]; }

 protected:
  void apply_action(const Vec& a) override;

 private:
  void sync_state();

  PointPushParams p_;
  Vec agent_{0.0, 0.0};
  Vec object_{0.0, 0.0};
};

struct PlanarRotateParams {
  int horizon = 50;
  double tolerance = 0.1;   // radians
  double dt = 0.15;
  double torque_scale = 1.5;
  double damping = 0.3;
  double max_speed = 2.0;   // rad/s
};

// Torque-limited rotation of a held object to a target angle. Success at the
// final timestep requires actively holding the orientation, which is what
// makes low-hold demonstrations genuinely suboptimal here.
class PlanarRotateEnv final : public EnvBase {
 public:
  explicit PlanarRotateEnv(const PlanarRotateParams& p);

  void reset(Rng& rng) override;
  Vec achieved_goal() const override { return {theta_}; }
  Vec sample_goal(Rng& rng) const override;
  Vec sample_easy_goal(const Vec& g_init, Rng& rng) const override;
  std::unique_ptr<Env> clone() const override { return std::make_unique<PlanarRotateEnv>(*this); }

  const PlanarRotateParams& params() const { return p_; }
  double angle() const { return theta_; }
  double angular_velocity() const { return omega_; }

 protected:
  void apply_action(const Vec& a) override;

 private:
  void sync_state();

  PlanarRotateParams p_;
  double theta_ = 0.0;
  double omega_ = 0.0;
};

}  // namespace sagail
