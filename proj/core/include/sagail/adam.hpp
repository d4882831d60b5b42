#pragma once

#include <span>
#include <vector>

#include "sagail/net.hpp"

namespace sagail {

// Bias-corrected Adam. Moment buffers are laid out per layer to mirror
// DenseNet parameters; the flat-span entry point below is the single
// implementation both paths share.
struct AdamState {
  long step_count = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::vector<Vec> m_weights, v_weights;
  std::vector<Vec> m_biases, v_biases;

  static AdamState for_net(const DenseNet& net, double learning_rate);
};

// One update on a flat parameter array. step_count must already be
// incremented by the caller (bias correction uses it). Throws on
// non-finite gradients.
void adam_update_flat(std::span<double> params, std::span<const double> grads, std::span<double> m,
                      std::span<double> v, long step_count, double learning_rate, double beta1,
                      double beta2, double epsilon);

// One Adam step over all network parameters; increments state.step_count.
void adam_step(DenseNet& net, const Gradients& grads, AdamState& state);

}  // namespace sagail
