#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sagail/demos.hpp"

using namespace sagail;

namespace {

std::string temp_path(const std::string& stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("bitflip demos: clean controller fixes one switch per step and holds") {
  auto env = make_env("bitflip8");
  DemoProfile profile;  // optimal: noise 0, skew 0, hold forever
  const DemoDataset ds = generate_demos(*env, profile, 20, 5);
  CHECK(ds.trajectories.size() == 20);
  for (const Trajectory& t : ds.trajectories) {
    CHECK(t.achieved_ever());
    CHECK(t.source == TrajectorySource::demo_seed);
    // Bit-by-bit correction: at-goal from step Hamming onward, held to the end.
    int hamming = 0;
    for (int i = 0; i < 8; ++i)
      if (t.achieved.front()[i] != t.desired_goal[i]) ++hamming;
    for (int step = 0; step < t.horizon(); ++step)
      CHECK(t.rewards[step] == (step + 1 > hamming ? 0.0 : -1.0));
  }
}

TEST_CASE("generation is a pure function of (env, profile, count, seed)") {
  auto env1 = make_env("planarrotate");
  auto env2 = make_env("planarrotate");
  const DemoProfile profile = named_profile("suboptimal");
  const DemoDataset a = generate_demos(*env1, profile, 10, 42);
  const DemoDataset b = generate_demos(*env2, profile, 10, 42);
  REQUIRE(a.trajectories.size() == b.trajectories.size());
  for (size_t i = 0; i < a.trajectories.size(); ++i) {
    CHECK(a.trajectories[i].states == b.trajectories[i].states);
    CHECK(a.trajectories[i].actions == b.trajectories[i].actions);
    CHECK(a.trajectories[i].desired_goal == b.trajectories[i].desired_goal);
  }
}

TEST_CASE("skew 1 concentrates goal-pair distances in the lowest quartile") {
  auto env = make_env("planarrotate");
  DemoProfile profile;
  profile.coverage_skew = 1.0;
  const DemoDataset ds = generate_demos(*env, profile, 50, 7);
  const GoalSpace space = ds.header.goal_space();
  for (const Trajectory& t : ds.trajectories) {
    const double d = goal_distance(space, t.achieved.front(), t.desired_goal);
    CHECK(d <= space.max_distance / 4.0 + 1e-9);
  }
  const CoverageReport rep = analyze_coverage(ds);
  CHECK(rep.mass_below(space.max_distance / 4.0) >= 0.9);
}

TEST_CASE("suboptimal profile brackets the low-hold teleoperation regime") {
  auto env = make_env("planarrotate");
  const DemoProfile profile = named_profile("suboptimal");
  const DemoDataset ds = generate_demos(*env, profile, 100, 11);
  const CoverageReport rep = analyze_coverage(ds);
  CHECK(rep.mean_hold_fraction >= 0.15);
  CHECK(rep.mean_hold_fraction <= 0.35);
}

TEST_CASE("optimal profile holds the goal for most of the episode") {
  auto env = make_env("planarrotate");
  const DemoDataset ds = generate_demos(*env, named_profile("optimal"), 50, 13);
  const CoverageReport rep = analyze_coverage(ds);
  CHECK(rep.mean_hold_fraction > 0.75);
}

TEST_CASE("pointpush demos: clean controller succeeds and parks the object") {
  auto env = make_env("pointpush2d");
  const DemoDataset ds = generate_demos(*env, named_profile("optimal"), 25, 17);
  CHECK(ds.trajectories.size() == 25);
  int final_successes = 0;
  for (const Trajectory& t : ds.trajectories) {
    CHECK(t.achieved_ever());
    if (t.achieved_at_final()) ++final_successes;
  }
  CHECK(final_successes >= 20);  // pushed object stays put once released
}

TEST_CASE("generation failure reports the achieved count") {
  auto env = make_env("pointpush2d");
  DemoProfile hopeless;
  hopeless.noise_scale = 60.0;  // pure flailing
  hopeless.max_attempts = 2;
  try {
    generate_demos(*env, hopeless, 5, 3);
    FAIL("expected generate_demos to give up");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("of 5") != std::string::npos);
    CHECK(msg.find("10 attempts") != std::string::npos);
  }
}

TEST_CASE("dataset save/load round trip is lossless") {
  auto env = make_env("planarrotate");
  const DemoDataset ds = generate_demos(*env, named_profile("suboptimal"), 8, 23);
  const std::string path = temp_path("sagail_demo_roundtrip.jsonl");
  save_dataset(ds, path);
  const DemoDataset back = load_dataset(path);
  CHECK(back.header.env_id == ds.header.env_id);
  CHECK(back.header.count == static_cast<int>(ds.trajectories.size()));
  CHECK(back.header.profile.coverage_skew == ds.header.profile.coverage_skew);
  REQUIRE(back.trajectories.size() == ds.trajectories.size());
  for (size_t i = 0; i < ds.trajectories.size(); ++i) {
    CHECK(back.trajectories[i].states == ds.trajectories[i].states);
    CHECK(back.trajectories[i].actions == ds.trajectories[i].actions);
    CHECK(back.trajectories[i].achieved == ds.trajectories[i].achieved);
    CHECK(back.trajectories[i].desired_goal == ds.trajectories[i].desired_goal);
    CHECK(back.trajectories[i].rewards == ds.trajectories[i].rewards);
    CHECK(back.trajectories[i].episode_return == ds.trajectories[i].episode_return);
  }
  std::remove(path.c_str());
}

TEST_CASE("dataset spec mismatch is rejected explicitly") {
  auto rot = make_env("planarrotate");
  const DemoDataset ds = generate_demos(*rot, named_profile("optimal"), 3, 29);
  auto push = make_env("pointpush2d");
  CHECK_THROWS_WITH_AS(check_dataset_spec(ds, push->spec()),
                       doctest::Contains("does not match"), std::runtime_error);
}

TEST_CASE("truncated and corrupt dataset files name the failing record") {
  auto env = make_env("bitflip8");
  const DemoDataset ds = generate_demos(*env, named_profile("optimal"), 5, 31);
  const std::string path = temp_path("sagail_demo_trunc.jsonl");
  save_dataset(ds, path);

  // Drop the last line: record 5 goes missing.
  std::vector<std::string> lines;
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  {
    std::ofstream out(path);
    for (size_t i = 0; i + 1 < lines.size(); ++i) out << lines[i] << '\n';
  }
  try {
    load_dataset(path);
    FAIL("expected truncation error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("record 5") != std::string::npos);
  }

  // Mangle record 2.
  {
    std::ofstream out(path);
    for (size_t i = 0; i < lines.size(); ++i)
      out << (i == 2 ? lines[i].substr(0, lines[i].size() / 2) : lines[i]) << '\n';
  }
  try {
    load_dataset(path);
    FAIL("expected corruption error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("record 2") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("coverage analysis: degenerate and uniform synthetic datasets") {
  DemoDataset ds;
  ds.header.env_id = "unit";
  ds.header.state_dim = 1;
  ds.header.action_dim = 1;
  ds.header.goal_dim = 1;
  ds.header.horizon = 2;
  ds.header.metric = "euclidean";
  ds.header.tolerance = 0.5;
  ds.header.max_goal_distance = 4.0;
  ds.header.goal_feat = "identity";

  auto traj_at = [&](double g_init, double g_d) {
    Trajectory t;
    t.desired_goal = {g_d};
    t.states = {{g_init}, {g_d}, {g_d}};
    t.achieved = {{g_init}, {g_d}, {g_d}};
    t.actions = {{0.0}, {0.0}};
    t.rewards = {0.0, 0.0};
    t.episode_return = 0.0;
    return t;
  };

  SUBCASE("all-identical goal pairs occupy a single bin with density 1") {
    for (int i = 0; i < 12; ++i) ds.trajectories.push_back(traj_at(0.0, 1.3));
    const CoverageReport rep = analyze_coverage(ds);
    int occupied = 0;
    for (const auto& b : rep.bins)
      if (b.count > 0) {
        ++occupied;
        CHECK(b.density == doctest::Approx(1.0));
        CHECK(1.3 >= b.lo);
        CHECK(1.3 < b.hi);
      }
    CHECK(occupied == 1);
    CHECK(rep.mean_hold_fraction == doctest::Approx(1.0));
    CHECK(rep.return_mean == 0.0);
  }

  SUBCASE("uniform distances give an approximately flat histogram") {
    Rng rng(37);
    const int n = 4000;
    for (int i = 0; i < n; ++i) ds.trajectories.push_back(traj_at(0.0, rng.uniform(0.0, 4.0)));
    const CoverageReport rep = analyze_coverage(ds);
    // Each of 20 bins expects 5%; allow a 3.5-sigma band.
    const double sigma = std::sqrt(0.05 * 0.95 / n);
    for (const auto& b : rep.bins) {
      CHECK(b.density > 0.05 - 3.5 * sigma);
      CHECK(b.density < 0.05 + 3.5 * sigma);
    }
  }
}

TEST_CASE("named profiles") {
  const DemoProfile opt = named_profile("optimal");
  CHECK(opt.noise_scale == 0.0);
  CHECK(opt.coverage_skew == 0.0);
  CHECK(opt.hold_fraction_target == 1.0);
  const DemoProfile sub = named_profile("suboptimal");
  CHECK(sub.coverage_skew == doctest::Approx(0.8));
  CHECK(sub.noise_scale > 0.0);
  CHECK(sub.hold_fraction_target < 0.5);
  CHECK_THROWS_AS(named_profile("perfect"), std::invalid_argument);
}
