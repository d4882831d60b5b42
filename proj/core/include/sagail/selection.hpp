#pragma once

#include <optional>
#include <string>

#include "sagail/replay.hpp"

namespace sagail {

// Goal-based admission of self-generated trajectories into the expert
// buffer. A successful episode is either directly admitted (no comparably
// difficult demonstration exists within the combined-distance threshold) or
// admitted by beating the return of its most similar demonstration.

struct AdmissionConfig {
  double c_comb = 0.25;         // combined goal-pair distance threshold
  bool require_success = true;  // only episodes that reach their goal are candidates
};

enum class AdmissionDecision { admit_direct, admit_better, reject };

std::string decision_name(AdmissionDecision d);

struct AdmissionVerdict {
  AdmissionDecision decision = AdmissionDecision::reject;
  // Index into the expert buffer of the most similar demonstration; empty
  // when no match was computed (unsuccessful episode or empty buffer).
  std::optional<size_t> matched_expert;
  std::optional<double> d_min;

  bool admitted() const { return decision != AdmissionDecision::reject; }
};

// Sum of the init-goal and desired-goal distances between two goal-pairs
// under the task metric.
double combined_distance(const GoalPair& a, const GoalPair& b, const GoalSpace& space);

// Expert trajectory minimizing the combined goal-pair distance to gp; ties
// break toward the earliest inserted. Requires a nonempty buffer.
std::pair<size_t, double> find_most_similar(const GoalPair& gp, const TrajectoryBuffer& expert_buf,
                                            const GoalSpace& space);

// Admission rule:
//   unsuccessful (when required)            -> reject
//   empty buffer or d_min > c_comb          -> admit_direct
//   return strictly beats the matched demo  -> admit_better
//   otherwise                               -> reject
AdmissionVerdict decide_admission(const Trajectory& traj, const TrajectoryBuffer& expert_buf,
                                  const GoalSpace& space, const AdmissionConfig& config);

// Per-epoch admission counters surfaced in the metrics log.
struct AdmissionStats {
  long admit_direct = 0;
  long admit_better = 0;
  long reject = 0;
  double d_min_sum = 0.0;
  long d_min_count = 0;

  void record(const AdmissionVerdict& v);
  double mean_d_min() const;
  void merge(const AdmissionStats& other);
};

}  // namespace sagail
