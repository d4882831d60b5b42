#include "sagail/goal_space.hpp"

#include <cmath>
#include <stdexcept>

namespace sagail {

std::string metric_name(GoalMetric m) {
  return m == GoalMetric::euclidean ? "euclidean" : "angular";
}

GoalMetric metric_from_name(const std::string& name) {
  if (name == "euclidean") return GoalMetric::euclidean;
  if (name == "angular") return GoalMetric::angular;
  throw std::invalid_argument("unknown goal metric: " + name);
}

double wrap_angle(double x) {
  const double two_pi = 2.0 * M_PI;
  return x - two_pi * std::floor((x + M_PI) / two_pi);
}

double goal_distance(const GoalSpace& space, std::span<const double> a, std::span<const double> b) {
  if (static_cast<int>(a.size()) != space.dimension || static_cast<int>(b.size()) != space.dimension)
    throw std::invalid_argument("goal_distance: dimension mismatch");
  switch (space.metric) {
    case GoalMetric::euclidean: {
      double s = 0.0;
      for (int i = 0; i < space.dimension; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case GoalMetric::angular: {
      if (space.dimension != 1)
        throw std::invalid_argument("goal_distance: angular metric requires dimension 1");
      return std::fabs(wrap_angle(a[0] - b[0]));
    }
  }
  throw std::logic_error("goal_distance: bad metric enum");
}

double sparse_reward(const GoalSpace& space, std::span<const double> achieved,
                     std::span<const double> desired) {
  return goal_distance(space, achieved, desired) < space.tolerance ? 0.0 : -1.0;
}

}  // namespace sagail
