#pragma once

#include <span>

#include "sagail/mat.hpp"

namespace sagail {

// Running mean/std over observed vectors; standardized values are clipped
// to +-clip standard deviations. Disabled instances pass values through.
class RunningNormalizer {
 public:
  RunningNormalizer() = default;
  RunningNormalizer(int dim, double clip, bool enabled = true);

  void update(std::span<const double> x);
  void normalize(std::span<const double> x, std::span<double> out) const;
  Vec normalize(const Vec& x) const;

  int dim() const { return dim_; }
  bool enabled() const { return enabled_; }
  double clip() const { return clip_; }
  long count() const { return count_; }
  double mean(int i) const;
  double stddev(int i) const;

  // Raw accumulators, exposed for checkpointing.
  const Vec& sum() const { return sum_; }
  const Vec& sum_sq() const { return sum_sq_; }
  void restore(Vec sum, Vec sum_sq, long count);

 private:
  int dim_ = 0;
  double clip_ = 5.0;
  bool enabled_ = false;
  long count_ = 0;
  Vec sum_, sum_sq_;
};

}  // namespace sagail
