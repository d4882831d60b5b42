#include "sagail/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace sagail {

AdamState AdamState::for_net(const DenseNet& net, double learning_rate) {
  AdamState s;
  s.learning_rate = learning_rate;
  for (const Mat& w : net.weights) {
    s.m_weights.emplace_back(w.size(), 0.0);
    s.v_weights.emplace_back(w.size(), 0.0);
  }
  for (const Vec& b : net.biases) {
    s.m_biases.emplace_back(b.size(), 0.0);
    s.v_biases.emplace_back(b.size(), 0.0);
  }
  return s;
}

void adam_update_flat(std::span<double> params, std::span<const double> grads, std::span<double> m,
                      std::span<double> v, long step_count, double learning_rate, double beta1,
                      double beta2, double epsilon) {
  if (params.size() != grads.size() || params.size() != m.size() || params.size() != v.size())
    throw std::invalid_argument("adam_update_flat: shape mismatch");
  if (!all_finite(grads)) throw std::runtime_error("adam_update_flat: non-finite gradient");

  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
  for (size_t i = 0; i < params.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + epsilon);
  }
}

void adam_step(DenseNet& net, const Gradients& grads, AdamState& state) {
  if (grads.d_weights.size() != net.weights.size() || grads.d_biases.size() != net.biases.size())
    throw std::invalid_argument("adam_step: gradient layout mismatch");
  ++state.step_count;
  for (size_t l = 0; l < net.weights.size(); ++l) {
    adam_update_flat(net.weights[l].a, grads.d_weights[l].a, state.m_weights[l], state.v_weights[l],
                     state.step_count, state.learning_rate, state.beta1, state.beta2, state.epsilon);
    adam_update_flat(net.biases[l], grads.d_biases[l], state.m_biases[l], state.v_biases[l],
                     state.step_count, state.learning_rate, state.beta1, state.beta2, state.epsilon);
  }
  net.check_finite();
}

}  // namespace sagail
