#pragma once

#include <string>
#include <vector>

#include "sagail/mat.hpp"
#include "sagail/rng.hpp"

namespace sagail {

enum class Activation { identity, relu, tanh_fn, sigmoid };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Fully connected network. weights[l] maps layer_sizes[l] -> layer_sizes[l+1]
// and has shape (layer_sizes[l+1], layer_sizes[l]), row-major. Hidden layers
// share one activation; the last layer has its own.
struct DenseNet {
  std::vector<int> layer_sizes;
  Activation hidden_act = Activation::relu;
  Activation output_act = Activation::identity;
  std::vector<Mat> weights;
  std::vector<Vec> biases;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int layer_count() const { return static_cast<int>(weights.size()); }
  size_t parameter_count() const;

  // Uniform fan-in init: U(-1/sqrt(fan_in), 1/sqrt(fan_in)). The last layer
  // can be scaled down (small initial actor outputs).
  static DenseNet make(std::vector<int> sizes, Activation hidden, Activation output, Rng& rng,
                       double final_layer_scale = 1.0);

  void check_dims() const;    // throws on inconsistent shapes
  void check_finite() const;  // throws if any parameter is NaN/Inf
};

// Gradients shaped like a DenseNet's parameters.
struct Gradients {
  std::vector<Mat> d_weights;
  std::vector<Vec> d_biases;

  static Gradients zeros_like(const DenseNet& net);
  void scale(double s);
  void add(const Gradients& other, double s = 1.0);
};

// Post-activation layer outputs cached by forward_cached; acts[0] is the
// input batch, acts.back() the network output.
struct Tape {
  std::vector<Mat> acts;
};

Mat forward(const DenseNet& net, const Mat& batch);
const Mat& forward_cached(const DenseNet& net, const Mat& batch, Tape& tape);

// Backprop of a scalar loss given dL/d(output). Returns dL/d(input) and
// fills grads with dL/d(parameters).
Mat backward(const DenseNet& net, const Tape& tape, const Mat& upstream_grad, Gradients& grads);

// Convenience wrapper: forward + backward in one call.
Mat backward(const DenseNet& net, const Mat& batch, const Mat& upstream_grad, Gradients& grads);

}  // namespace sagail
