#include "sagail/demos.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "envs_impl.hpp"

namespace sagail {

using nlohmann::json;

DemoProfile named_profile(const std::string& name) {
  DemoProfile p;
  if (name == "optimal") return p;
  if (name == "suboptimal") {
    p.noise_scale = 0.6;
    p.coverage_skew = 0.8;
    p.hold_fraction_target = 0.3;
    p.max_attempts = 100;
    return p;
  }
  throw std::invalid_argument("unknown demo profile: " + name);
}

GoalSpace DemoHeader::goal_space() const {
  return GoalSpace{goal_dim, metric_from_name(metric), tolerance, max_goal_distance};
}

void ScriptedController::begin_episode(const Env&, Rng&) {}

namespace {

// Decides when a controller that has reached its goal deliberately lets go,
// and for how long. Calibrated so the measured hold fraction lands near the
// profile's target once arrival time is accounted for.
struct ReleaseScheduler {
  double hazard = 0.0;
  int release_len = 5;
  int remaining = 0;

  explicit ReleaseScheduler(double hold_fraction_target) {
    if (hold_fraction_target < 0.999) {
      const double f = std::clamp(hold_fraction_target, 0.05, 0.95);
      hazard = (1.0 - f) / (f * (release_len + 6.0));
    }
  }

  bool sabotage(bool at_goal, Rng& rng) {
    if (remaining > 0) {
      --remaining;
      return true;
    }
    if (at_goal && hazard > 0.0 && rng.bernoulli(hazard)) {
      remaining = release_len - 1;
      return true;
    }
    return false;
  }
};

class BitFlipController final : public ScriptedController {
 public:
  BitFlipController(const DemoProfile& profile) : profile_(profile), release_(profile.hold_fraction_target) {}

  void begin_episode(const Env&, Rng&) override { release_.remaining = 0; }

  Vec act(const Env& env, Rng& rng) override {
    const Vec& bits = env.state();
    const Vec& goal = env.desired_goal();
    const int n = static_cast<int>(bits.size());
    Vec a(n, -1.0);
    int first_mismatch = -1;
    for (int i = 0; i < n; ++i) {
      if (bits[i] != goal[i]) {
        first_mismatch = i;
        break;
      }
    }
    if (release_.sabotage(first_mismatch < 0, rng)) {
      a[rng.uniform_int(n)] = 1.0;  // knock a random switch
      return a;
    }
    int pick = first_mismatch;
    if (pick >= 0 && profile_.noise_scale > 0.0 && rng.bernoulli(0.3 * profile_.noise_scale))
      pick = rng.uniform_int(n);  // fumble: flip an arbitrary switch
    if (pick >= 0) a[pick] = 1.0;
    return a;
  }

 private:
  DemoProfile profile_;
  ReleaseScheduler release_;
};

class PointPushController final : public ScriptedController {
 public:
  PointPushController(const PointPushEnv& env, const DemoProfile& profile)
      : p_(env.params()), profile_(profile), release_(profile.hold_fraction_target) {}

  void begin_episode(const Env&, Rng&) override { release_.remaining = 0; }

  Vec act(const Env& env, Rng& rng) override {
    const Vec& s = env.state();
    const double px = s[0], py = s[1], ox = s[2], oy = s[3];
    const Vec& g = env.desired_goal();
    const double to_goal_x = g[0] - ox, to_goal_y = g[1] - oy;
    const double dist_og = std::hypot(to_goal_x, to_goal_y);
    const bool at_goal = dist_og < p_.tolerance;

    double vx = 0.0, vy = 0.0;
    const double rc = p_.contact_radius;
    const double d_po = std::hypot(ox - px, oy - py);

    if (release_.sabotage(at_goal, rng)) {
      // Walk straight into the object: knocks it off the target.
      if (d_po > 1e-9) {
        vx = (ox - px) / d_po;
        vy = (oy - py) / d_po;
      } else {
        vx = 1.0;
      }
      vx *= p_.max_step;
      vy *= p_.max_step;
    } else if (at_goal) {
      // Back off to a safe distance and park.
      if (d_po < rc + 0.02 && d_po > 1e-9) {
        vx = (px - ox) / d_po * p_.max_step;
        vy = (py - oy) / d_po * p_.max_step;
      }
    } else {
      const double ux = to_goal_x / dist_og, uy = to_goal_y / dist_og;
      const double behind_dot =
          d_po > 1e-9 ? ((ox - px) / d_po) * ux + ((oy - py) / d_po) * uy : -1.0;
      const bool in_position = behind_dot > 0.9 && d_po < rc + 0.045;
      if (in_position) {
        // Step through the contact radius; the push depth is capped near the
        // goal to avoid overshooting past the tolerance.
        const double pen = std::min(0.03, 0.6 * dist_og);
        const double tx = ox - (rc - pen) * ux;
        const double ty = oy - (rc - pen) * uy;
        vx = tx - px;
        vy = ty - py;
      } else {
        const double tx = ox - (rc + 0.03) * ux;
        const double ty = oy - (rc + 0.03) * uy;
        vx = tx - px;
        vy = ty - py;
        // Steer around the object instead of bumping it while repositioning.
        if (d_po < rc + 0.015 && d_po > 1e-9) {
          const double push = (rc + 0.02 - d_po) * 3.0;
          vx += (px - ox) / d_po * push;
          vy += (py - oy) / d_po * push;
        }
      }
    }

    Vec a = {vx / p_.max_step, vy / p_.max_step};
    for (double& x : a) {
      if (profile_.noise_scale > 0.0) x += 0.6 * profile_.noise_scale * rng.normal();
      x = std::clamp(x, -1.0, 1.0);
    }
    return a;
  }

 private:
  PointPushParams p_;
  DemoProfile profile_;
  ReleaseScheduler release_;
};

class PlanarRotateController final : public ScriptedController {
 public:
  PlanarRotateController(const PlanarRotateEnv& env, const DemoProfile& profile)
      : p_(env.params()), profile_(profile), release_(profile.hold_fraction_target) {
    // Clean gains are near-critically damped; noise skews them toward an
    // over-aggressive, underdamped controller that overshoots.
    kp_ = 2.0 * (1.0 + 1.5 * profile.noise_scale);
    kd_ = 1.2 * (1.0 - 0.7 * profile.noise_scale);
  }

  void begin_episode(const Env&, Rng&) override { release_.remaining = 0; }

  Vec act(const Env& env, Rng& rng) override {
    const auto& rot = static_cast<const PlanarRotateEnv&>(env);
    const double err = wrap_angle(env.desired_goal()[0] - rot.angle());
    const bool at_goal = std::fabs(err) < p_.tolerance;
    double torque;
    if (release_.sabotage(at_goal, rng)) {
      torque = rng.uniform(-1.0, 1.0);  // let go: random twitch
    } else {
      torque = kp_ * err - kd_ * rot.angular_velocity();
      if (profile_.noise_scale > 0.0) torque += 0.5 * profile_.noise_scale * rng.normal();
    }
    return {std::clamp(torque, -1.0, 1.0)};
  }

 private:
  PlanarRotateParams p_;
  DemoProfile profile_;
  ReleaseScheduler release_;
  double kp_ = 2.0, kd_ = 1.2;
};

}  // namespace

std::unique_ptr<ScriptedController> make_controller(const Env& env, const DemoProfile& profile) {
  if (auto* push = dynamic_cast<const PointPushEnv*>(&env))
    return std::make_unique<PointPushController>(*push, profile);
  if (auto* rot = dynamic_cast<const PlanarRotateEnv*>(&env))
    return std::make_unique<PlanarRotateController>(*rot, profile);
  if (dynamic_cast<const BitFlipEnv*>(&env)) return std::make_unique<BitFlipController>(profile);
  throw std::invalid_argument("no scripted controller for environment: " + env.spec().id);
}

DemoDataset generate_demos(Env& env, const DemoProfile& profile, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("generate_demos: count must be >= 1");
  const EnvSpec& spec = env.spec();
  DemoDataset ds;
  ds.header.env_id = spec.id;
  ds.header.state_dim = spec.state_dim;
  ds.header.action_dim = spec.action_dim;
  ds.header.goal_dim = spec.goal.dimension;
  ds.header.horizon = spec.horizon;
  ds.header.metric = metric_name(spec.goal.metric);
  ds.header.tolerance = spec.goal.tolerance;
  ds.header.max_goal_distance = spec.goal.max_distance;
  ds.header.goal_feat = spec.goal_feat == GoalFeaturization::angle_cos_sin ? "angle_cos_sin" : "identity";
  ds.header.profile = profile;
  ds.header.seed = seed;
  ds.header.count = count;

  auto controller = make_controller(env, profile);
  const Rng root(seed);
  const long budget = static_cast<long>(profile.max_attempts) * count;
  long attempts = 0;
  while (static_cast<int>(ds.trajectories.size()) < count) {
    if (attempts >= budget) {
      std::ostringstream msg;
      msg << "generate_demos: controller produced only " << ds.trajectories.size() << " of "
          << count << " successful episodes within " << budget << " attempts";
      throw std::runtime_error(msg.str());
    }
    Rng rng = root.derive({static_cast<std::uint64_t>(++attempts)});
    env.reset(rng);
    if (profile.coverage_skew > 0.0 && rng.bernoulli(profile.coverage_skew))
      env.set_desired_goal(env.sample_easy_goal(env.achieved_goal(), rng));
    controller->begin_episode(env, rng);
    Trajectory traj =
        run_episode(env, [&](const Env& e) { return controller->act(e, rng); });
    if (!traj.achieved_ever()) continue;
    traj.source = TrajectorySource::demo_seed;
    ds.trajectories.push_back(std::move(traj));
  }
  return ds;
}

namespace {

json profile_to_json(const DemoProfile& p) {
  return json{{"controller", p.controller},
              {"noise_scale", p.noise_scale},
              {"coverage_skew", p.coverage_skew},
              {"hold_fraction_target", p.hold_fraction_target},
              {"max_attempts", p.max_attempts}};
}

DemoProfile profile_from_json(const json& j) {
  DemoProfile p;
  p.controller = j.at("controller").get<std::string>();
  p.noise_scale = j.at("noise_scale").get<double>();
  p.coverage_skew = j.at("coverage_skew").get<double>();
  p.hold_fraction_target = j.at("hold_fraction_target").get<double>();
  p.max_attempts = j.at("max_attempts").get<int>();
  return p;
}

EnvSpec spec_from_header(const DemoHeader& h) {
  EnvSpec spec;
  spec.id = h.env_id;
  spec.state_dim = h.state_dim;
  spec.action_dim = h.action_dim;
  spec.horizon = h.horizon;
  spec.goal = h.goal_space();
  spec.goal_feat =
      h.goal_feat == "angle_cos_sin" ? GoalFeaturization::angle_cos_sin : GoalFeaturization::identity;
  return spec;
}

}  // namespace

void save_dataset(const DemoDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dataset: cannot open " + path);
  const DemoHeader& h = dataset.header;
  json header{{"format_version", h.format_version},
              {"kind", "demo_dataset"},
              {"env_id", h.env_id},
              {"state_dim", h.state_dim},
              {"action_dim", h.action_dim},
              {"goal_dim", h.goal_dim},
              {"horizon", h.horizon},
              {"metric", h.metric},
              {"tolerance", h.tolerance},
              {"max_goal_distance", h.max_goal_distance},
              {"goal_feat", h.goal_feat},
              {"profile", profile_to_json(h.profile)},
              {"seed", h.seed},
              {"count", static_cast<int>(dataset.trajectories.size())}};
  out << header.dump() << '\n';
  for (const Trajectory& t : dataset.trajectories) {
    json rec{{"states", t.states},
             {"actions", t.actions},
             {"achieved_goals", t.achieved},
             {"desired_goal", t.desired_goal},
             {"rewards", t.rewards},
             {"source", source_name(t.source)}};
    out << rec.dump() << '\n';
  }
  if (!out) throw std::runtime_error("save_dataset: write failed for " + path);
}

DemoDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dataset: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_dataset: empty file " + path);

  DemoDataset ds;
  try {
    const json header = json::parse(line);
    if (header.at("kind").get<std::string>() != "demo_dataset")
      throw std::runtime_error("not a demo dataset");
    ds.header.format_version = header.at("format_version").get<int>();
    if (ds.header.format_version != 1)
      throw std::runtime_error("unsupported format_version " +
                               std::to_string(ds.header.format_version));
    ds.header.env_id = header.at("env_id").get<std::string>();
    ds.header.state_dim = header.at("state_dim").get<int>();
    ds.header.action_dim = header.at("action_dim").get<int>();
    ds.header.goal_dim = header.at("goal_dim").get<int>();
    ds.header.horizon = header.at("horizon").get<int>();
    ds.header.metric = header.at("metric").get<std::string>();
    ds.header.tolerance = header.at("tolerance").get<double>();
    ds.header.max_goal_distance = header.at("max_goal_distance").get<double>();
    ds.header.goal_feat = header.at("goal_feat").get<std::string>();
    ds.header.profile = profile_from_json(header.at("profile"));
    ds.header.seed = header.at("seed").get<std::uint64_t>();
    ds.header.count = header.at("count").get<int>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("load_dataset: bad header: ") + e.what());
  }

  const EnvSpec spec = spec_from_header(ds.header);
  for (int i = 0; i < ds.header.count; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("load_dataset: truncated file, record " + std::to_string(i + 1) +
                               " of " + std::to_string(ds.header.count) + " missing");
    Trajectory t;
    try {
      const json rec = json::parse(line);
      t.states = rec.at("states").get<std::vector<Vec>>();
      t.actions = rec.at("actions").get<std::vector<Vec>>();
      t.achieved = rec.at("achieved_goals").get<std::vector<Vec>>();
      t.desired_goal = rec.at("desired_goal").get<Vec>();
      t.rewards = rec.at("rewards").get<Vec>();
      t.source = source_from_name(rec.value("source", "demo_seed"));
      t.episode_return = t.recompute_return();
      validate_trajectory(t, spec);
      if (!t.achieved_ever())
        throw std::runtime_error("stored trajectory never reaches its goal");
    } catch (const std::exception& e) {
      throw std::runtime_error("load_dataset: record " + std::to_string(i + 1) + ": " + e.what());
    }
    ds.trajectories.push_back(std::move(t));
  }
  return ds;
}

void check_dataset_spec(const DemoDataset& dataset, const EnvSpec& spec) {
  const DemoHeader& h = dataset.header;
  if (h.env_id != spec.id || h.state_dim != spec.state_dim || h.action_dim != spec.action_dim ||
      h.goal_dim != spec.goal.dimension || h.horizon != spec.horizon ||
      h.tolerance != spec.goal.tolerance || metric_from_name(h.metric) != spec.goal.metric) {
    throw std::runtime_error("demo dataset was recorded for environment '" + h.env_id +
                             "' and does not match '" + spec.id + "'");
  }
}

double CoverageReport::mass_below(double distance) const {
  double m = 0.0;
  for (const Bin& b : bins)
    if (b.hi <= distance + 1e-12) m += b.density;
  return m;
}

CoverageReport analyze_coverage(const DemoDataset& dataset) {
  if (dataset.trajectories.empty())
    throw std::invalid_argument("analyze_coverage: empty dataset");
  const GoalSpace space = dataset.header.goal_space();
  CoverageReport rep;
  rep.trajectory_count = static_cast<int>(dataset.trajectories.size());
  rep.bins.resize(CoverageReport::kBins);
  const double width = space.max_distance / CoverageReport::kBins;
  for (int b = 0; b < CoverageReport::kBins; ++b) {
    rep.bins[b].lo = b * width;
    rep.bins[b].hi = (b + 1) * width;
  }

  double hold_sum = 0.0;
  double ret_sum = 0.0, ret_sq = 0.0;
  rep.return_min = dataset.trajectories.front().episode_return;
  rep.return_max = rep.return_min;
  for (const Trajectory& t : dataset.trajectories) {
    const double d = goal_distance(space, t.achieved.front(), t.desired_goal);
    int b = static_cast<int>(d / width);
    b = std::clamp(b, 0, CoverageReport::kBins - 1);
    ++rep.bins[b].count;

    int at_goal = 0;
    for (double r : t.rewards)
      if (r == 0.0) ++at_goal;
    hold_sum += static_cast<double>(at_goal) / t.horizon();

    ret_sum += t.episode_return;
    ret_sq += t.episode_return * t.episode_return;
    rep.return_min = std::min(rep.return_min, t.episode_return);
    rep.return_max = std::max(rep.return_max, t.episode_return);
  }
  for (auto& b : rep.bins) b.density = static_cast<double>(b.count) / rep.trajectory_count;
  rep.mean_hold_fraction = hold_sum / rep.trajectory_count;
  rep.return_mean = ret_sum / rep.trajectory_count;
  const double var = std::max(0.0, ret_sq / rep.trajectory_count - rep.return_mean * rep.return_mean);
  rep.return_stddev = std::sqrt(var);
  return rep;
}

std::string coverage_table_text(const CoverageReport& rep) {
  std::ostringstream os;
  os << "goal-distance histogram (" << rep.trajectory_count << " trajectories)\n";
  os << "   bin            count  density\n";
  char buf[96];
  for (const auto& b : rep.bins) {
    std::snprintf(buf, sizeof(buf), "  [%6.3f,%6.3f) %6d  %6.4f", b.lo, b.hi, b.count, b.density);
    os << buf << '\n';
  }
  std::snprintf(buf, sizeof(buf), "mean hold fraction: %.4f", rep.mean_hold_fraction);
  os << buf << '\n';
  std::snprintf(buf, sizeof(buf), "episode return: mean %.3f  stddev %.3f  min %.3f  max %.3f",
                rep.return_mean, rep.return_stddev, rep.return_min, rep.return_max);
  os << buf << '\n';
  return os.str();
}

void write_coverage_csv(const CoverageReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_coverage_csv: cannot open " + path);
  out << "bin_lo,bin_hi,count,density\n";
  for (const auto& b : rep.bins)
    out << b.lo << ',' << b.hi << ',' << b.count << ',' << b.density << '\n';
}

}  // namespace sagail
