#include <doctest.h>

#include <cmath>

#include "sagail/selection.hpp"

using namespace sagail;

namespace {

EnvSpec line_spec(int horizon = 4) {
  EnvSpec s;
  s.id = "unit";
  s.state_dim = 1;
  s.action_dim = 1;
  s.horizon = horizon;
  s.goal = GoalSpace{1, GoalMetric::euclidean, 0.5, 10.0};
  return s;
}

// Episode whose goal-pair is (g_init, g_d) and that spends `steps_at_goal`
// final steps at the goal (return = -(T - steps_at_goal)).
Trajectory traj_with(const EnvSpec& spec, double g_init, double g_d, int steps_at_goal) {
  Trajectory t;
  const int T = spec.horizon;
  REQUIRE(steps_at_goal <= T);
  t.desired_goal = {g_d};
  t.achieved.push_back({g_init});
  t.states.push_back({g_init});
  for (int i = 1; i <= T; ++i) {
    const bool at_goal = i > T - steps_at_goal;
    const double a = at_goal ? g_d : g_init;
    t.achieved.push_back({a});
    t.states.push_back({a});
  }
  for (int i = 0; i < T; ++i) {
    t.actions.push_back({0.0});
    t.rewards.push_back(sparse_reward(spec.goal, t.achieved[i + 1], t.desired_goal));
  }
  t.episode_return = t.recompute_return();
  return t;
}

// Brute-force oracle: exhaustive scan plus explicit branch replay.
AdmissionVerdict reference_admission(const Trajectory& traj, const TrajectoryBuffer& re,
                                     const GoalSpace& space, const AdmissionConfig& cfg) {
  AdmissionVerdict v;
  bool success = false;
  for (double r : traj.rewards)
    if (r == 0.0) success = true;
  if (cfg.require_success && !success) {
    v.decision = AdmissionDecision::reject;
    return v;
  }
  if (re.empty()) {
    v.decision = AdmissionDecision::admit_direct;
    return v;
  }
  size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < re.size(); ++i) {
    const double d = goal_distance(space, traj.achieved.front(), re[i].achieved.front()) +
                     goal_distance(space, traj.desired_goal, re[i].desired_goal);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  v.d_min = best_d;
  if (best_d > cfg.c_comb) {
    v.decision = AdmissionDecision::admit_direct;
  } else if (traj.episode_return > re[best].episode_return) {
    v.decision = AdmissionDecision::admit_better;
    v.matched_expert = best;
  } else {
    v.decision = AdmissionDecision::reject;
    v.matched_expert = best;
  }
  return v;
}

}  // namespace

TEST_CASE("combined_distance: hand cases and symmetry") {
  const GoalSpace space{1, GoalMetric::euclidean, 0.5, 10.0};
  const GoalPair a{{1.0}, {2.0}};
  CHECK(combined_distance(a, a, space) == 0.0);
  const GoalPair b{{1.1}, {2.2}};  // init distance 0.1 + desired distance 0.2
  CHECK(combined_distance(a, b, space) == doctest::Approx(0.3).epsilon(1e-12));
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const GoalPair x{{rng.uniform(-5, 5)}, {rng.uniform(-5, 5)}};
    const GoalPair y{{rng.uniform(-5, 5)}, {rng.uniform(-5, 5)}};
    CHECK(combined_distance(x, y, space) == doctest::Approx(combined_distance(y, x, space)));
  }
}

TEST_CASE("find_most_similar: single entry, brute-force agreement, tie rule") {
  const EnvSpec spec = line_spec();
  TrajectoryBuffer re(64, spec);
  re.push(traj_with(spec, 0.0, 4.0, 1));
  const Trajectory probe = traj_with(spec, 1.0, 3.0, 1);
  auto [idx, d] = find_most_similar(probe.goal_pair(), re, spec.goal);
  CHECK(idx == 0);
  CHECK(d == doctest::Approx(2.0));  // |1-0| + |3-4|

  // 50 random expert entries: agree with an exhaustive linear scan.
  Rng rng(7);
  TrajectoryBuffer re2(64, spec);
  for (int i = 0; i < 50; ++i)
    re2.push(traj_with(spec, rng.uniform(-5, 5), rng.uniform(-5, 5), 1 + rng.uniform_int(3)));
  for (int round = 0; round < 100; ++round) {
    const Trajectory q = traj_with(spec, rng.uniform(-5, 5), rng.uniform(-5, 5), 1);
    auto [got_i, got_d] = find_most_similar(q.goal_pair(), re2, spec.goal);
    size_t want_i = 0;
    double want_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < re2.size(); ++i) {
      const double di = combined_distance(q.goal_pair(), re2[i].goal_pair(), spec.goal);
      if (di < want_d) {
        want_d = di;
        want_i = i;
      }
    }
    CHECK(got_i == want_i);
    CHECK(got_d == doctest::Approx(want_d));
  }

  // Constructed tie: two experts at the same combined distance; the earlier
  // insertion wins.
  TrajectoryBuffer re3(8, spec);
  re3.push(traj_with(spec, -1.0, 2.0, 1));  // distance |0.5 - (-1)| + |2 - 2| = 1.5
  re3.push(traj_with(spec, 2.0, 2.0, 2));   // distance |0.5 - 2| + 0 = 1.5
  const Trajectory q = traj_with(spec, 0.5, 2.0, 1);
  auto [tie_idx, tie_d] = find_most_similar(q.goal_pair(), re3, spec.goal);
  CHECK(tie_d == doctest::Approx(1.5));
  CHECK(tie_idx == 0);

  TrajectoryBuffer empty(8, spec);
  CHECK_THROWS_AS(find_most_similar(q.goal_pair(), empty, spec.goal), std::invalid_argument);
}

TEST_CASE("decide_admission: threshold, better-return, boundary, and success gating") {
  const EnvSpec spec = line_spec();
  const AdmissionConfig cfg{0.25, true};
  TrajectoryBuffer re(8, spec);
  re.push(traj_with(spec, 0.0, 1.0, 1));  // expert return -(4-1) = -3

  // Far goal-pair: d_min = 0.5 > 0.25 -> admit_direct.
  const Trajectory far = traj_with(spec, 0.25, 1.25, 1);
  AdmissionVerdict v = decide_admission(far, re, spec.goal, cfg);
  CHECK(v.decision == AdmissionDecision::admit_direct);
  CHECK(v.d_min == doctest::Approx(0.5));

  // Similar goal-pair, higher return (more time at goal) -> admit_better.
  const Trajectory better = traj_with(spec, 0.05, 1.05, 3);  // return -1 > -3
  v = decide_admission(better, re, spec.goal, cfg);
  CHECK(v.decision == AdmissionDecision::admit_better);
  REQUIRE(v.matched_expert.has_value());
  CHECK(*v.matched_expert == 0);

  // Equal returns -> reject (strictly greater required).
  const Trajectory equal = traj_with(spec, 0.05, 1.05, 1);
  v = decide_admission(equal, re, spec.goal, cfg);
  CHECK(v.decision == AdmissionDecision::reject);

  // Unsuccessful episodes are rejected outright when success is required.
  const Trajectory failed = traj_with(spec, 0.05, 9.0, 0);
  v = decide_admission(failed, re, spec.goal, cfg);
  CHECK(v.decision == AdmissionDecision::reject);
  CHECK(!v.matched_expert.has_value());
  CHECK(!v.d_min.has_value());

  AdmissionConfig lenient = cfg;
  lenient.require_success = false;
  v = decide_admission(failed, re, spec.goal, lenient);
  CHECK(v.decision == AdmissionDecision::admit_direct);  // d_min 8.0 > 0.25

  // Empty buffer: successful episodes are admitted directly.
  TrajectoryBuffer empty(8, spec);
  v = decide_admission(better, empty, spec.goal, cfg);
  CHECK(v.decision == AdmissionDecision::admit_direct);

  CHECK_THROWS_AS(decide_admission(better, re, spec.goal, AdmissionConfig{0.0, true}),
                  std::invalid_argument);
}

TEST_CASE("decide_admission agrees with the brute-force reference on random instances") {
  const EnvSpec spec = line_spec();
  Rng rng(13);
  int direct = 0, better = 0, rejected = 0;
  for (int round = 0; round < 200; ++round) {
    TrajectoryBuffer re(32, spec);
    const int n = 1 + rng.uniform_int(12);
    for (int i = 0; i < n; ++i)
      re.push(traj_with(spec, rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform_int(5)));
    // Tight c_comb so both branches occur; occasional duplicates force ties.
    const AdmissionConfig cfg{rng.uniform(0.1, 2.0), rng.bernoulli(0.8)};
    const Trajectory probe =
        traj_with(spec, rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform_int(5));
    const AdmissionVerdict got = decide_admission(probe, re, spec.goal, cfg);
    const AdmissionVerdict want = reference_admission(probe, re, spec.goal, cfg);
    CHECK(got.decision == want.decision);
    CHECK(got.matched_expert == want.matched_expert);
    if (got.d_min.has_value() && want.d_min.has_value())
      CHECK(*got.d_min == doctest::Approx(*want.d_min));
    else if (want.d_min.has_value())
      CHECK(got.d_min.has_value());
    switch (got.decision) {
      case AdmissionDecision::admit_direct: ++direct; break;
      case AdmissionDecision::admit_better: ++better; break;
      case AdmissionDecision::reject: ++rejected; break;
    }
  }
  // The random instances must exercise all three outcomes.
  CHECK(direct > 0);
  CHECK(better > 0);
  CHECK(rejected > 0);
}

TEST_CASE("branch boundary in c_comb moves one way") {
  const EnvSpec spec = line_spec();
  Rng rng(17);
  for (int round = 0; round < 100; ++round) {
    TrajectoryBuffer re(8, spec);
    re.push(traj_with(spec, rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform_int(4)));
    const Trajectory probe = traj_with(spec, rng.uniform(-2, 2), rng.uniform(-2, 2), 2);
    bool left_direct = false;
    for (double c = 0.05; c < 8.0; c += 0.05) {
      const auto v = decide_admission(probe, re, spec.goal, AdmissionConfig{c, true});
      if (v.decision != AdmissionDecision::admit_direct) left_direct = true;
      // Once the threshold passes d_min the direct branch never comes back.
      if (left_direct) CHECK(v.decision != AdmissionDecision::admit_direct);
    }
  }
}

TEST_CASE("sparse returns order trajectories by time at the goal") {
  const EnvSpec spec = line_spec(6);
  for (int k1 = 0; k1 <= 6; ++k1) {
    const Trajectory t1 = traj_with(spec, 0.0, 3.0, k1);
    CHECK(t1.episode_return == doctest::Approx(-(6.0 - k1)));
    for (int k2 = 0; k2 <= 6; ++k2) {
      const Trajectory t2 = traj_with(spec, 0.0, 3.0, k2);
      CHECK((t1.episode_return > t2.episode_return) == (k1 > k2));
    }
  }
}

TEST_CASE("admission stats aggregate decisions and d_min") {
  AdmissionStats stats;
  AdmissionVerdict v;
  v.decision = AdmissionDecision::admit_direct;
  v.d_min = 1.0;
  stats.record(v);
  v.decision = AdmissionDecision::reject;
  v.d_min = 2.0;
  stats.record(v);
  v.decision = AdmissionDecision::admit_better;
  v.d_min.reset();
  stats.record(v);
  CHECK(stats.admit_direct == 1);
  CHECK(stats.admit_better == 1);
  CHECK(stats.reject == 1);
  CHECK(stats.mean_d_min() == doctest::Approx(1.5));
}
