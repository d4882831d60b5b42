#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sagail/env.hpp"
#include "sagail/replay.hpp"

namespace sagail {

// Knobs of a scripted demonstrator. noise_scale degrades control quality,
// coverage_skew concentrates goals on easy goal-pairs, hold_fraction_target
// drives premature-release events after the goal is first reached (1.0 means
// hold forever). Generation keeps only successful episodes.
struct DemoProfile {
  std::string controller = "scripted";
  double noise_scale = 0.0;
  double coverage_skew = 0.0;        // in [0,1]: probability of an easy-quartile goal
  double hold_fraction_target = 1.0; // in (0,1]
  int max_attempts = 50;             // per requested trajectory
};

// "optimal": clean controller, uniform goals. "suboptimal": noisy, easy-goal
// skewed, low hold fraction -- the teleoperation-quality regime.
DemoProfile named_profile(const std::string& name);

struct DemoHeader {
  int format_version = 1;
  std::string env_id;
  int state_dim = 0, action_dim = 0, goal_dim = 0, horizon = 0;
  std::string metric;
  double tolerance = 0.0;
  double max_goal_distance = 0.0;
  std::string goal_feat;
  DemoProfile profile;
  std::uint64_t seed = 0;
  int count = 0;

  GoalSpace goal_space() const;
};

struct DemoDataset {
  DemoHeader header;
  std::vector<Trajectory> trajectories;
};

// Per-episode scripted policy; holds whatever internal phase state the
// controller needs across steps.
class ScriptedController {
 public:
  virtual ~ScriptedController() = default;
  virtual void begin_episode(const Env& env, Rng& rng);
  virtual Vec act(const Env& env, Rng& rng) = 0;
};

std::unique_ptr<ScriptedController> make_controller(const Env& env, const DemoProfile& profile);

// Generates exactly `count` successful trajectories (reward 0 somewhere in
// the episode). Deterministic in (env spec, profile, count, seed). Throws,
// reporting the achieved count, if the attempt budget runs out.
DemoDataset generate_demos(Env& env, const DemoProfile& profile, int count, std::uint64_t seed);

// Line-delimited records: a header line followed by one trajectory per line.
void save_dataset(const DemoDataset& dataset, const std::string& path);
DemoDataset load_dataset(const std::string& path);

// Throws when the dataset was recorded for a different environment.
void check_dataset_spec(const DemoDataset& dataset, const EnvSpec& spec);

struct CoverageReport {
  static constexpr int kBins = 20;
  struct Bin {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    double density = 0.0;  // fraction of trajectories
  };
  std::vector<Bin> bins;
  int trajectory_count = 0;
  double mean_hold_fraction = 0.0;  // mean fraction of steps spent at the goal
  double return_mean = 0.0, return_stddev = 0.0, return_min = 0.0, return_max = 0.0;

  double mass_below(double distance) const;  // density summed over bins with hi <= distance
};

// Histogram of d(g_init, g_d) over fixed bins spanning [0, max_goal_distance]
// plus hold-fraction and return summaries.
CoverageReport analyze_coverage(const DemoDataset& dataset);

std::string coverage_table_text(const CoverageReport& report);
void write_coverage_csv(const CoverageReport& report, const std::string& path);

}  // namespace sagail
