#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sagail/checkpoint.hpp"

using namespace sagail;

namespace {

std::string temp_path(const std::string& stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("checkpoint round trip: forward passes are bit-identical") {
  auto env = make_env("planarrotate");
  DdpgConfig cfg;
  cfg.hidden = {16, 16};
  Rng rng(3);
  DdpgAgent agent(env->spec(), cfg, rng);
  // Give the normalizers some state so their stats are exercised too.
  Rng data(5);
  for (int i = 0; i < 20; ++i) {
    env->reset(data);
    Trajectory t = run_episode(*env, [&](const Env& v) {
      return agent.act(v.state(), v.desired_goal(), true, data);
    });
    agent.observe_episode(t);
  }
  GailConfig gcfg;
  gcfg.hidden = {16, 16};
  Rng drng(7);
  Discriminator disc(env->spec(), gcfg, drng);

  const std::string path = temp_path("sagail_ckpt_test.json");
  Rng train_rng(11);
  train_rng.next_u64();
  save_checkpoint(path, "goal_gail", agent, &disc, 3, train_rng.save_state());

  LoadedCheckpoint loaded = load_checkpoint(path);
  CHECK(loaded.algo == "goal_gail");
  CHECK(loaded.epochs_completed == 3);
  CHECK(loaded.env_spec.compatible_with(env->spec()));
  REQUIRE(loaded.agent);
  REQUIRE(loaded.disc);

  // Deterministic action equality on a probe grid.
  Rng dummy(0);
  for (double s0 : {-0.9, 0.0, 0.4}) {
    for (double g : {-2.0, 0.5, 3.0}) {
      const Vec state = {s0, 0.5, -0.25};
      const Vec a = agent.act(state, {g}, false, dummy);
      const Vec b = loaded.agent->act(state, {g}, false, dummy);
      CHECK(a == b);  // bitwise
    }
  }
  // Discriminator scores too.
  Mat in(1, 6);
  in.a = {0.2, -0.4, 1.0, 0.3, 0.8, -0.1};
  CHECK(disc.scores(in) == loaded.disc->scores(in));

  // Optimizer and RNG state survive.
  CHECK(loaded.agent->actor_opt().step_count == agent.actor_opt().step_count);
  Rng restored(0);
  restored.restore_state(loaded.rng_state);
  CHECK(restored.next_u64() == train_rng.next_u64());
  std::remove(path.c_str());
}

TEST_CASE("checkpoint without a discriminator restores as such") {
  auto env = make_env("bitflip4");
  DdpgConfig cfg;
  cfg.hidden = {8};
  Rng rng(13);
  DdpgAgent agent(env->spec(), cfg, rng);
  const std::string path = temp_path("sagail_ckpt_her.json");
  save_checkpoint(path, "her", agent, nullptr, 1, Rng(1).save_state());
  LoadedCheckpoint loaded = load_checkpoint(path);
  CHECK(loaded.disc == nullptr);
  CHECK(loaded.algo == "her");
  std::remove(path.c_str());
}

TEST_CASE("checkpoint loader rejects junk and wrong kinds") {
  const std::string path = temp_path("sagail_ckpt_junk.json");
  {
    std::ofstream out(path);
    out << "{\"kind\": \"demo_dataset\"}\n";
  }
  CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
  {
    std::ofstream out(path);
    out << "not json at all\n";
  }
  CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
  CHECK_THROWS_AS(load_checkpoint(temp_path("does_not_exist.json")), std::runtime_error);
  std::remove(path.c_str());
}
