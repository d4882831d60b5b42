#include "sagail/selection.hpp"

#include <cmath>
#include <stdexcept>

namespace sagail {

std::string decision_name(AdmissionDecision d) {
  switch (d) {
    case AdmissionDecision::admit_direct: return "admit_direct";
    case AdmissionDecision::admit_better: return "admit_better";
    case AdmissionDecision::reject: return "reject";
  }
  throw std::logic_error("decision_name: bad enum");
}

double combined_distance(const GoalPair& a, const GoalPair& b, const GoalSpace& space) {
  return goal_distance(space, a.g_init, b.g_init) + goal_distance(space, a.g_d, b.g_d);
}

std::pair<size_t, double> find_most_similar(const GoalPair& gp, const TrajectoryBuffer& expert_buf,
                                            const GoalSpace& space) {
  if (expert_buf.empty()) throw std::invalid_argument("find_most_similar: empty expert buffer");
  size_t best = 0;
  double best_d = combined_distance(gp, expert_buf[0].goal_pair(), space);
  for (size_t i = 1; i < expert_buf.size(); ++i) {
    const double d = combined_distance(gp, expert_buf[i].goal_pair(), space);
    if (d < best_d) {  // strict: ties keep the earliest inserted
      best = i;
      best_d = d;
    }
  }
  return {best, best_d};
}

AdmissionVerdict decide_admission(const Trajectory& traj, const TrajectoryBuffer& expert_buf,
                                  const GoalSpace& space, const AdmissionConfig& config) {
  if (config.c_comb <= 0.0) throw std::invalid_argument("decide_admission: c_comb must be > 0");
  AdmissionVerdict v;
  if (config.require_success && !traj.achieved_ever()) {
    v.decision = AdmissionDecision::reject;
    return v;
  }
  if (expert_buf.empty()) {
    v.decision = AdmissionDecision::admit_direct;
    return v;
  }
  auto [idx, d_min] = find_most_similar(traj.goal_pair(), expert_buf, space);
  v.matched_expert = idx;
  v.d_min = d_min;
  if (d_min > config.c_comb) {
    v.decision = AdmissionDecision::admit_direct;
    v.matched_expert.reset();  // no comparison was made against it
  } else if (traj.episode_return > expert_buf[idx].episode_return) {
    v.decision = AdmissionDecision::admit_better;
  } else {
    v.decision = AdmissionDecision::reject;
  }
  return v;
}

void AdmissionStats::record(const AdmissionVerdict& v) {
  switch (v.decision) {
    case AdmissionDecision::admit_direct: ++admit_direct; break;
    case AdmissionDecision::admit_better: ++admit_better; break;
    case AdmissionDecision::reject: ++reject; break;
  }
  if (v.d_min) {
    d_min_sum += *v.d_min;
    ++d_min_count;
  }
}

double AdmissionStats::mean_d_min() const {
  return d_min_count > 0 ? d_min_sum / d_min_count : std::nan("");
}

void AdmissionStats::merge(const AdmissionStats& other) {
  admit_direct += other.admit_direct;
  admit_better += other.admit_better;
  reject += other.reject;
  d_min_sum += other.d_min_sum;
  d_min_count += other.d_min_count;
}

}  // namespace sagail
