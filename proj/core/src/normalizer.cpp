#include "sagail/normalizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sagail {

namespace {
constexpr double kVarFloor = 1e-8;
}

RunningNormalizer::RunningNormalizer(int dim, double clip, bool enabled)
    : dim_(dim), clip_(clip), enabled_(enabled), sum_(dim, 0.0), sum_sq_(dim, 0.0) {}

void RunningNormalizer::update(std::span<const double> x) {
  if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("RunningNormalizer: dim mismatch");
  for (int i = 0; i < dim_; ++i) {
    sum_[i] += x[i];
    sum_sq_[i] += x[i] * x[i];
  }
  ++count_;
}

double RunningNormalizer::mean(int i) const { return count_ > 0 ? sum_[i] / count_ : 0.0; }

double RunningNormalizer::stddev(int i) const {
  if (count_ == 0) return 1.0;
  const double mu = sum_[i] / count_;
  const double var = std::max(kVarFloor, sum_sq_[i] / count_ - mu * mu);
  return std::sqrt(var);
}

void RunningNormalizer::normalize(std::span<const double> x, std::span<double> out) const {
  if (x.size() != out.size() || static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("RunningNormalizer: dim mismatch");
  if (!enabled_ || count_ == 0) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  for (int i = 0; i < dim_; ++i) {
    const double z = (x[i] - mean(i)) / stddev(i);
    out[i] = std::clamp(z, -clip_, clip_);
  }
}

Vec RunningNormalizer::normalize(const Vec& x) const {
  Vec out(x.size());
  normalize(x, out);
  return out;
}

void RunningNormalizer::restore(Vec sum, Vec sum_sq, long count) {
  if (static_cast<int>(sum.size()) != dim_ || static_cast<int>(sum_sq.size()) != dim_)
    throw std::invalid_argument("RunningNormalizer::restore: dim mismatch");
  sum_ = std::move(sum);
  sum_sq_ = std::move(sum_sq);
  count_ = count;
}

}  // namespace sagail
