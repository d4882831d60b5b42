#include "sagail/replay.hpp"

#include <cmath>
#include <stdexcept>

namespace sagail {

std::string source_name(TrajectorySource s) {
  switch (s) {
    case TrajectorySource::demo_seed: return "demo_seed";
    case TrajectorySource::self_admitted: return "self_admitted";
    case TrajectorySource::agent: return "agent";
  }
  throw std::logic_error("source_name: bad enum");
}

TrajectorySource source_from_name(const std::string& name) {
  if (name == "demo_seed") return TrajectorySource::demo_seed;
  if (name == "self_admitted") return TrajectorySource::self_admitted;
  if (name == "agent") return TrajectorySource::agent;
  throw std::invalid_argument("unknown trajectory source: " + name);
}

double Trajectory::recompute_return() const {
  double s = 0.0;
  for (double r : rewards) s += r;
  return s;
}

bool Trajectory::achieved_ever() const {
  for (double r : rewards)
    if (r == 0.0) return true;
  return false;
}

bool Trajectory::achieved_at_final() const { return !rewards.empty() && rewards.back() == 0.0; }

void validate_trajectory(const Trajectory& t, const EnvSpec& spec) {
  const int T = spec.horizon;
  if (t.horizon() != T) throw std::invalid_argument("trajectory: horizon mismatch");
  if (static_cast<int>(t.states.size()) != T + 1 || static_cast<int>(t.achieved.size()) != T + 1 ||
      static_cast<int>(t.rewards.size()) != T)
    throw std::invalid_argument("trajectory: field lengths inconsistent");
  if (static_cast<int>(t.desired_goal.size()) != spec.goal.dimension)
    throw std::invalid_argument("trajectory: desired goal dimension mismatch");
  for (const Vec& s : t.states)
    if (static_cast<int>(s.size()) != spec.state_dim)
      throw std::invalid_argument("trajectory: state dimension mismatch");
  for (const Vec& a : t.actions)
    if (static_cast<int>(a.size()) != spec.action_dim)
      throw std::invalid_argument("trajectory: action dimension mismatch");
  for (const Vec& g : t.achieved)
    if (static_cast<int>(g.size()) != spec.goal.dimension)
      throw std::invalid_argument("trajectory: achieved goal dimension mismatch");
  for (int i = 0; i < T; ++i) {
    const double expect = sparse_reward(spec.goal, t.achieved[i + 1], t.desired_goal);
    if (t.rewards[i] != expect)
      throw std::invalid_argument("trajectory: stored reward inconsistent with goals");
  }
  if (t.episode_return != t.recompute_return())
    throw std::invalid_argument("trajectory: cached return inconsistent");
}

Transition BatchItem::materialize() const {
  Transition tr;
  tr.state = state();
  tr.action = action();
  tr.next_state = next_state();
  tr.achieved_goal = achieved_goal();
  tr.next_achieved_goal = next_achieved_goal();
  tr.desired_goal = desired_goal;
  tr.reward = reward;
  tr.is_expert = is_expert;
  return tr;
}

TrajectoryBuffer::TrajectoryBuffer(size_t capacity, EnvSpec spec)
    : capacity_(capacity), spec_(std::move(spec)) {
  if (capacity_ == 0) throw std::invalid_argument("TrajectoryBuffer: capacity must be positive");
}

std::optional<Trajectory> TrajectoryBuffer::push(Trajectory t) {
  validate_trajectory(t, spec_);
  std::optional<Trajectory> evicted;
  if (items_.size() >= capacity_) {
    evicted = std::move(items_.front());
    items_.pop_front();
  }
  items_.push_back(std::move(t));
  ++total_pushed_;
  return evicted;
}

size_t TrajectoryBuffer::transition_count() const { return items_.size() * spec_.horizon; }

double TrajectoryBuffer::mean_goal_pair_distance() const {
  if (items_.empty()) return std::nan("");
  double s = 0.0;
  for (const Trajectory& t : items_)
    s += goal_distance(spec_.goal, t.achieved.front(), t.desired_goal);
  return s / static_cast<double>(items_.size());
}

namespace {

BatchItem draw_item(const TrajectoryBuffer& buf, bool is_expert, Rng& rng) {
  const Trajectory& traj = buf[static_cast<size_t>(rng.uniform_int(static_cast<int>(buf.size())))];
  BatchItem item;
  item.traj = &traj;
  item.t = rng.uniform_int(traj.horizon());
  item.desired_goal = traj.desired_goal;
  item.reward = traj.rewards[item.t];
  item.is_expert = is_expert;
  return item;
}

}  // namespace

std::vector<BatchItem> sample_transitions(const TrajectoryBuffer* agent_buf,
                                          const TrajectoryBuffer* expert_buf, int batch_size,
                                          double demo_ratio, Rng& rng) {
  if (batch_size < 1) throw std::invalid_argument("sample_transitions: batch_size must be >= 1");
  if (demo_ratio < 0.0 || demo_ratio > 1.0)
    throw std::invalid_argument("sample_transitions: demo_ratio must lie in [0,1]");

  const int n_expert = static_cast<int>(std::floor(demo_ratio * batch_size));
  const int n_agent = batch_size - n_expert;
  if (n_expert > 0 && (expert_buf == nullptr || expert_buf->empty()))
    throw std::invalid_argument("sample_transitions: expert share requested from an empty buffer");
  if (n_agent > 0 && (agent_buf == nullptr || agent_buf->empty()))
    throw std::invalid_argument("sample_transitions: agent share requested from an empty buffer");

  std::vector<BatchItem> batch;
  batch.reserve(batch_size);
  for (int i = 0; i < n_expert; ++i) batch.push_back(draw_item(*expert_buf, true, rng));
  for (int i = 0; i < n_agent; ++i) batch.push_back(draw_item(*agent_buf, false, rng));
  return batch;
}

double union_demo_ratio(const TrajectoryBuffer* agent_buf, const TrajectoryBuffer* expert_buf) {
  const double ne = expert_buf ? static_cast<double>(expert_buf->transition_count()) : 0.0;
  const double na = agent_buf ? static_cast<double>(agent_buf->transition_count()) : 0.0;
  if (ne + na == 0.0) return 0.0;
  return ne / (ne + na);
}

}  // namespace sagail
