#pragma once

#include <span>
#include <string>

namespace sagail {

enum class GoalMetric { euclidean, angular };

std::string metric_name(GoalMetric m);
GoalMetric metric_from_name(const std::string& name);

struct GoalSpace {
  int dimension = 0;
  GoalMetric metric = GoalMetric::euclidean;
  double tolerance = 0.05;     // success radius epsilon
  double max_distance = 1.0;   // largest attainable d(g_a, g_b), used for binning
};

// Wraps an angle into [-pi, pi).
double wrap_angle(double x);

// euclidean: L2 norm of the difference.
// angular: absolute wrapped difference, in [0, pi]; requires dimension 1.
double goal_distance(const GoalSpace& space, std::span<const double> a, std::span<const double> b);

// Sparse reward: 0 within tolerance, -1 outside.
double sparse_reward(const GoalSpace& space, std::span<const double> achieved,
                     std::span<const double> desired);

}  // namespace sagail
