#include <doctest.h>

#include <cmath>

#include "sagail/ddpg.hpp"
#include "sagail/env.hpp"

using namespace sagail;

namespace {

EnvSpec unit_spec(int state = 2, int act = 1, int goal = 1, int horizon = 4) {
  EnvSpec s;
  s.id = "unit";
  s.state_dim = state;
  s.action_dim = act;
  s.horizon = horizon;
  s.goal = GoalSpace{goal, GoalMetric::euclidean, 0.5, 4.0};
  return s;
}

DdpgConfig tiny_cfg() {
  DdpgConfig c;
  c.hidden = {8, 8};
  c.normalize_inputs = false;
  return c;
}

// One-trajectory episode whose transitions all share state/action values.
Trajectory flat_traj(const EnvSpec& spec, double state_v, double action_v, double achieved_v,
                     double desired_v) {
  Trajectory t;
  const int T = spec.horizon;
  t.desired_goal = Vec(spec.goal.dimension, desired_v);
  for (int i = 0; i <= T; ++i) {
    t.states.push_back(Vec(spec.state_dim, state_v));
    t.achieved.push_back(Vec(spec.goal.dimension, achieved_v));
  }
  for (int i = 0; i < T; ++i) {
    t.actions.push_back(Vec(spec.action_dim, action_v));
    t.rewards.push_back(sparse_reward(spec.goal, t.achieved[i + 1], t.desired_goal));
  }
  t.episode_return = t.recompute_return();
  return t;
}

std::vector<BatchItem> batch_from(const Trajectory& traj, int copies) {
  std::vector<BatchItem> batch;
  for (int c = 0; c < copies; ++c)
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

TEST_CASE("act: deterministic without exploration; noise 0 equals deterministic") {
  Rng rng(1);
  DdpgAgent agent(unit_spec(), tiny_cfg(), rng);
  const Vec s = {0.3, -0.7}, g = {0.5};
  Rng r1(2), r2(3);
  const Vec a1 = agent.act(s, g, false, r1);
  const Vec a2 = agent.act(s, g, false, r2);
  CHECK(a1 == a2);

  DdpgConfig cfg = tiny_cfg();
  cfg.noise_scale = 0.0;
  cfg.epsilon_random = 0.0;
  Rng rng2(1);
  DdpgAgent quiet(unit_spec(), cfg, rng2);
  Rng r3(4);
  CHECK(quiet.act(s, g, true, r3) == quiet.act(s, g, false, r3));
}

TEST_CASE("act: epsilon_random = 1 yields uniform actions over the bounds") {
  DdpgConfig cfg = tiny_cfg();
  cfg.epsilon_random = 1.0;
  Rng rng(5);
  DdpgAgent agent(unit_spec(), cfg, rng);
  Rng explore(6);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const Vec a = agent.act({0.1, 0.2}, {0.3}, true, explore);
    CHECK(a[0] >= -1.0);
    CHECK(a[0] <= 1.0);
    sum += a[0];
    sq += a[0] * a[0];
    if (a[0] < 0.0) ++below;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.02);                 // uniform(-1,1): mean 0
  CHECK(std::fabs(var - 1.0 / 3.0) < 0.01);      // variance 1/3
  CHECK(std::fabs(below / double(n) - 0.5) < 0.02);
}

TEST_CASE("soft_update: polyak endpoints and midpoint") {
  const EnvSpec spec = unit_spec();
  for (double polyak : {1.0, 0.0, 0.5}) {
    DdpgConfig cfg = tiny_cfg();
    cfg.polyak = polyak;
    Rng rng(7);
    DdpgAgent agent(spec, cfg, rng);
    // Drift the online nets away from the targets, to known values.
    DenseNet actor = agent.actor();
    DenseNet critic = agent.critic();
    DenseNet actor_t = agent.actor_target();
    DenseNet critic_t = agent.critic_target();
    for (Mat& w : actor.weights) w.fill(2.0);
    for (Mat& w : critic.weights) w.fill(2.0);
    for (Mat& w : actor_t.weights) w.fill(0.0);
    for (Mat& w : critic_t.weights) w.fill(0.0);
    agent.restore(actor, critic, actor_t, critic_t, agent.actor_opt(), agent.critic_opt(),
                  agent.obs_normalizer(), agent.goal_normalizer());
    agent.soft_update_targets();
    const double expect = polyak * 2.0;  // polyak*online + (1-polyak)*target
    CHECK(agent.actor_target().weights[0].a[0] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(agent.critic_target().weights[0].a[0] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("update: gamma = 0 makes the critic fit the immediate reward") {
  const EnvSpec spec = unit_spec();
  DdpgConfig cfg = tiny_cfg();
  cfg.gamma = 1e-9;  // effectively myopic; keeps the (0,1) contract
  Rng rng(11);
  DdpgAgent agent(spec, cfg, rng);
  const Trajectory traj = flat_traj(spec, 0.5, 0.25, 0.0, 2.0);  // rewards all -1
  auto batch = batch_from(traj, 8);
  for (int i = 0; i < 400; ++i) agent.update(batch, -1.0, 0.0);
  const Mat obs = build_obs(batch, spec, agent.obs_normalizer(), agent.goal_normalizer(), false);
  const Mat act = build_actions(batch, spec);
  const Mat q = agent.critic_values(obs, act);
  CHECK(q.a[0] == doctest::Approx(-1.0).epsilon(0.01));
}

TEST_CASE("update: zero-reward fixed point drives the loss down") {
  const EnvSpec spec = unit_spec();
  Rng rng(13);
  DdpgAgent agent(spec, tiny_cfg(), rng);
  const Trajectory traj = flat_traj(spec, 0.5, 0.25, 2.0, 2.0);  // at-goal everywhere: rewards 0
  auto batch = batch_from(traj, 8);
  double first_loss = 0.0, last_loss = 0.0;
  for (int i = 0; i < 300; ++i) {
    const auto diag = agent.update(batch, -1.0, 0.0);
    if (i == 0) first_loss = diag.critic_loss;
    last_loss = diag.critic_loss;
    agent.soft_update_targets();
  }
  CHECK(last_loss < first_loss);
  CHECK(last_loss < 1e-3);
  // Bootstrapped target of an always-0 reward fixed point is 0.
  const Mat obs = build_obs(batch, spec, agent.obs_normalizer(), agent.goal_normalizer(), false);
  const Mat act = build_actions(batch, spec);
  CHECK(agent.critic_values(obs, act).a[0] == doctest::Approx(0.0).epsilon(0.05));
}

TEST_CASE("update: critic and actor gradients match finite differences") {
  const EnvSpec spec = unit_spec(3, 2, 2, 3);
  DdpgConfig cfg = tiny_cfg();
  Rng rng(17);
  DdpgAgent agent(spec, cfg, rng);

  // A 10-sample batch over two episodes.
  const Trajectory t1 = flat_traj(spec, 0.4, 0.3, 0.1, 1.0);
  const Trajectory t2 = flat_traj(spec, -0.6, -0.2, 0.8, 0.6);
  std::vector<BatchItem> batch;
  {
    auto b1 = batch_from(t1, 2), b2 = batch_from(t2, 2);
    batch.insert(batch.end(), b1.begin(), b1.end());
    batch.insert(batch.end(), b2.begin(), b2.end());
    batch.resize(10);
  }
  const int B = static_cast<int>(batch.size());

  const Mat obs = build_obs(batch, spec, agent.obs_normalizer(), agent.goal_normalizer(), false);
  const Mat act = build_actions(batch, spec);
  const Mat critic_in = concat_cols(obs, act);

  // Fixed targets, as update() would compute them before the critic step.
  Vec y(B);
  for (int i = 0; i < B; ++i) y[i] = batch[i].reward;

  SUBCASE("critic TD loss") {
    DenseNet critic = agent.critic();
    auto loss = [&]() {
      const Mat q = forward(critic, critic_in);
      double s = 0.0;
      for (int i = 0; i < B; ++i) s += (q.a[i] - y[i]) * (q.a[i] - y[i]);
      return s / B;
    };
    Tape tape;
    const Mat& q = forward_cached(critic, critic_in, tape);
    Mat upstream(B, 1);
    for (int i = 0; i < B; ++i) upstream.a[i] = 2.0 * (q.a[i] - y[i]) / B;
    Gradients grads;
    backward(critic, tape, upstream, grads);

    Rng probe_rng(19);
    for (int probe = 0; probe < 100; ++probe) {
      const int layer = probe_rng.uniform_int(critic.layer_count());
      const int idx = probe_rng.uniform_int(static_cast<int>(critic.weights[layer].a.size()));
      double& slot = critic.weights[layer].a[idx];
      const double saved = slot;
      slot = saved + 1e-5;
      const double up = loss();
      slot = saved - 1e-5;
      const double down = loss();
      slot = saved;
      const double num = (up - down) / 2e-5;
      const double ana = grads.d_weights[layer].a[idx];
      CHECK(std::fabs(ana - num) / std::max({1e-8, std::fabs(ana), std::fabs(num)}) <= 1e-4);
    }
  }

  SUBCASE("actor loss through the critic") {
    DenseNet actor = agent.actor();
    const DenseNet& critic = agent.critic();
    const double alpha = cfg.action_penalty;
    const int a_dim = spec.action_dim;

    auto loss = [&]() {
      const Mat z = forward(actor, obs);
      Mat a_pi(B, a_dim);
      for (size_t i = 0; i < z.a.size(); ++i) a_pi.a[i] = std::tanh(z.a[i]);
      const Mat q = forward(critic, concat_cols(obs, a_pi));
      double s = 0.0;
      for (int i = 0; i < B; ++i) s -= q.a[i] / B;
      for (size_t i = 0; i < z.a.size(); ++i) s += alpha * z.a[i] * z.a[i] / (B * a_dim);
      return s;
    };

    // Analytic gradient, mirroring the update() chain.
    Tape actor_tape;
    const Mat& z = forward_cached(actor, obs, actor_tape);
    Mat a_pi(B, a_dim);
    for (size_t i = 0; i < z.a.size(); ++i) a_pi.a[i] = std::tanh(z.a[i]);
    Tape critic_tape;
    forward_cached(critic, concat_cols(obs, a_pi), critic_tape);
    Mat upstream(B, 1);
    upstream.fill(-1.0 / B);
    Gradients scratch;
    const Mat input_grads = backward(critic, critic_tape, upstream, scratch);
    Mat dz(B, a_dim);
    for (int i = 0; i < B; ++i)
      for (int j = 0; j < a_dim; ++j) {
        const double aij = a_pi(i, j);
        dz(i, j) = input_grads(i, obs.cols + j) * (1.0 - aij * aij) +
                   2.0 * alpha * z(i, j) / (B * a_dim);
      }
    Gradients grads;
    backward(actor, actor_tape, dz, grads);

    Rng probe_rng(23);
    for (int probe = 0; probe < 100; ++probe) {
      const int layer = probe_rng.uniform_int(actor.layer_count());
      const int idx = probe_rng.uniform_int(static_cast<int>(actor.weights[layer].a.size()));
      double& slot = actor.weights[layer].a[idx];
      const double saved = slot;
      slot = saved + 1e-5;
      const double up = loss();
      slot = saved - 1e-5;
      const double down = loss();
      slot = saved;
      const double num = (up - down) / 2e-5;
      const double ana = grads.d_weights[layer].a[idx];
      CHECK(std::fabs(ana - num) / std::max({1e-8, std::fabs(ana), std::fabs(num)}) <= 1e-4);
    }
  }
}

TEST_CASE("update: bit-identical under repetition from the same state") {
  const EnvSpec spec = unit_spec();
  Rng rng(29);
  DdpgAgent agent(spec, tiny_cfg(), rng);
  const Trajectory traj = flat_traj(spec, 0.1, 0.2, 0.3, 1.0);
  auto batch = batch_from(traj, 4);

  DdpgAgent a = agent, b = agent;
  a.update(batch, -1.0, 0.0);
  b.update(batch, -1.0, 0.0);
  for (size_t l = 0; l < a.actor().weights.size(); ++l)
    CHECK(a.actor().weights[l].a == b.actor().weights[l].a);
  for (size_t l = 0; l < a.critic().weights.size(); ++l)
    CHECK(a.critic().weights[l].a == b.critic().weights[l].a);
}

TEST_CASE("actor actions stay within bounds after updates") {
  const EnvSpec spec = unit_spec();
  Rng rng(31);
  DdpgAgent agent(spec, tiny_cfg(), rng);
  const Trajectory traj = flat_traj(spec, 0.1, 0.9, 0.3, 0.3);  // rewards 0: pushes Q up
  auto batch = batch_from(traj, 8);
  for (int i = 0; i < 50; ++i) agent.update(batch, -1.0, 0.0);
  Rng probe(37);
  for (int i = 0; i < 10000; ++i) {
    const Vec s = {probe.uniform(-5, 5), probe.uniform(-5, 5)};
    const Vec g = {probe.uniform(-5, 5)};
    const Vec a = agent.act(s, g, i % 2 == 0, probe);
    for (double x : a) {
      CHECK(x <= spec.action_bound);
      CHECK(x >= -spec.action_bound);
    }
  }
}

TEST_CASE("behavior cloning pulls the actor toward demo actions behind the Q-filter") {
  const EnvSpec spec = unit_spec();
  DdpgConfig cfg = tiny_cfg();
  cfg.behavior_cloning = true;
  cfg.bc_weight = 10.0;
  cfg.q_filter = false;  // always clone: isolates the BC pull
  cfg.action_penalty = 0.0;
  Rng rng(41);
  DdpgAgent agent(spec, cfg, rng);
  const Trajectory demo = flat_traj(spec, 0.2, 0.8, 0.0, 2.0);
  auto batch = batch_from(demo, 8);
  for (auto& item : batch) item.is_expert = true;
  Rng dummy(1);
  const double before = agent.act({0.2, 0.2}, {2.0}, false, dummy)[0];
  for (int i = 0; i < 200; ++i) {
    const auto diag = agent.update(batch, -1.0, 0.0);
    CHECK(diag.bc_applied == static_cast<int>(batch.size()));
  }
  const double after = agent.act({0.2, 0.2}, {2.0}, false, dummy)[0];
  CHECK(std::fabs(after - 0.8) < std::fabs(before - 0.8));
  CHECK(after > 0.5);

  // With the Q-filter on, the count can only shrink.
  cfg.q_filter = true;
  Rng rng2(43);
  DdpgAgent filtered(spec, cfg, rng2);
  const auto diag = filtered.update(batch, -1.0, 0.0);
  CHECK(diag.bc_applied <= static_cast<int>(batch.size()));
}
