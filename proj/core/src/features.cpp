#include "sagail/features.hpp"

#include <stdexcept>

namespace sagail {

int obs_dim(const EnvSpec& spec) { return spec.state_dim + spec.goal_feature_dim(); }

Vec build_obs_row(const Vec& state, const Vec& goal, const EnvSpec& spec,
                  const RunningNormalizer& obs_norm, const RunningNormalizer& goal_norm) {
  Vec row(obs_dim(spec));
  std::span<double> out(row);
  obs_norm.normalize(state, out.subspan(0, spec.state_dim));
  Vec feat = goal_features(spec, goal);
  goal_norm.normalize(feat, out.subspan(spec.state_dim, spec.goal_feature_dim()));
  return row;
}

Mat build_obs(const std::vector<BatchItem>& items, const EnvSpec& spec,
              const RunningNormalizer& obs_norm, const RunningNormalizer& goal_norm,
              bool next_state) {
  Mat m(static_cast<int>(items.size()), obs_dim(spec));
  for (size_t i = 0; i < items.size(); ++i) {
    const Vec& s = next_state ? items[i].next_state() : items[i].state();
    Vec row = build_obs_row(s, items[i].desired_goal, spec, obs_norm, goal_norm);
    std::copy(row.begin(), row.end(), m.row(static_cast<int>(i)).begin());
  }
  return m;
}

Mat build_actions(const std::vector<BatchItem>& items, const EnvSpec& spec) {
  Mat m(static_cast<int>(items.size()), spec.action_dim);
  for (size_t i = 0; i < items.size(); ++i) {
    const Vec& a = items[i].action();
    auto row = m.row(static_cast<int>(i));
    for (int j = 0; j < spec.action_dim; ++j) row[j] = a[j] / spec.action_bound;
  }
  return m;
}

Mat concat_cols(const Mat& a, const Mat& b) {
  if (a.rows != b.rows) throw std::invalid_argument("concat_cols: row count mismatch");
  Mat m(a.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i) {
    auto out = m.row(i);
    auto ra = a.row(i);
    auto rb = b.row(i);
    std::copy(ra.begin(), ra.end(), out.begin());
    std::copy(rb.begin(), rb.end(), out.begin() + a.cols);
  }
  return m;
}

}  // namespace sagail
