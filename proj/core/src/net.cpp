#include "sagail/net.hpp"

#include <cmath>
#include <stdexcept>

namespace sagail {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh_fn: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  throw std::logic_error("activation_name: bad enum");
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh_fn;
  if (name == "sigmoid") return Activation::sigmoid;
  throw std::invalid_argument("unknown activation: " + name);
}

namespace {

void apply_activation(Mat& z, Activation act) {
  switch (act) {
    case Activation::identity:
      return;
    case Activation::relu:
      for (double& x : z.a) x = x > 0.0 ? x : 0.0;
      return;
    case Activation::tanh_fn:
      for (double& x : z.a) x = std::tanh(x);
      return;
    case Activation::sigmoid:
      for (double& x : z.a) x = 1.0 / (1.0 + std::exp(-x));
      return;
  }
}

// Derivative expressed through the post-activation value h.
void scale_by_activation_grad(Mat& g, const Mat& h, Activation act) {
  switch (act) {
    case Activation::identity:
      return;
    case Activation::relu:
      for (size_t i = 0; i < g.a.size(); ++i) g.a[i] = h.a[i] > 0.0 ? g.a[i] : 0.0;
      return;
    case Activation::tanh_fn:
      for (size_t i = 0; i < g.a.size(); ++i) g.a[i] *= 1.0 - h.a[i] * h.a[i];
      return;
    case Activation::sigmoid:
      for (size_t i = 0; i < g.a.size(); ++i) g.a[i] *= h.a[i] * (1.0 - h.a[i]);
      return;
  }
}

}  // namespace

size_t DenseNet::parameter_count() const {
  size_t n = 0;
  for (const Mat& w : weights) n += w.size();
  for (const Vec& b : biases) n += b.size();
  return n;
}

DenseNet DenseNet::make(std::vector<int> sizes, Activation hidden, Activation output, Rng& rng,
                        double final_layer_scale) {
  if (sizes.size() < 2) throw std::invalid_argument("DenseNet::make: need at least two layers");
  for (int s : sizes)
    if (s <= 0) throw std::invalid_argument("DenseNet::make: layer sizes must be positive");

  DenseNet net;
  net.layer_sizes = std::move(sizes);
  net.hidden_act = hidden;
  net.output_act = output;
  const int n_layers = static_cast<int>(net.layer_sizes.size()) - 1;
  net.weights.reserve(n_layers);
  net.biases.reserve(n_layers);
  for (int l = 0; l < n_layers; ++l) {
    const int fan_in = net.layer_sizes[l];
    const int fan_out = net.layer_sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    const double scale = (l == n_layers - 1) ? final_layer_scale : 1.0;
    Mat w(fan_out, fan_in);
    for (double& x : w.a) x = scale * rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(fan_out, 0.0);
  }
  return net;
}

void DenseNet::check_dims() const {
  const size_t n = layer_sizes.size();
  if (n < 2 || weights.size() != n - 1 || biases.size() != n - 1)
    throw std::logic_error("DenseNet: layer bookkeeping inconsistent");
  for (size_t l = 0; l + 1 < n; ++l) {
    if (weights[l].rows != layer_sizes[l + 1] || weights[l].cols != layer_sizes[l] ||
        static_cast<int>(biases[l].size()) != layer_sizes[l + 1])
      throw std::logic_error("DenseNet: weight shape disagrees with layer sizes");
  }
}

void DenseNet::check_finite() const {
  for (const Mat& w : weights)
    if (!all_finite(w.a)) throw std::runtime_error("DenseNet: non-finite weight");
  for (const Vec& b : biases)
    if (!all_finite(b)) throw std::runtime_error("DenseNet: non-finite bias");
}

Gradients Gradients::zeros_like(const DenseNet& net) {
  Gradients g;
  g.d_weights.reserve(net.weights.size());
  g.d_biases.reserve(net.biases.size());
  for (const Mat& w : net.weights) g.d_weights.emplace_back(w.rows, w.cols);
  for (const Vec& b : net.biases) g.d_biases.emplace_back(b.size(), 0.0);
  return g;
}

void Gradients::scale(double s) {
  for (Mat& w : d_weights)
    for (double& x : w.a) x *= s;
  for (Vec& b : d_biases)
    for (double& x : b) x *= s;
}

void Gradients::add(const Gradients& other, double s) {
  for (size_t l = 0; l < d_weights.size(); ++l) {
    for (size_t i = 0; i < d_weights[l].a.size(); ++i) d_weights[l].a[i] += s * other.d_weights[l].a[i];
    for (size_t i = 0; i < d_biases[l].size(); ++i) d_biases[l][i] += s * other.d_biases[l][i];
  }
}

const Mat& forward_cached(const DenseNet& net, const Mat& batch, Tape& tape) {
  if (batch.cols != net.input_dim())
    throw std::invalid_argument("forward: input width does not match layer_sizes[0]");
  const int n_layers = net.layer_count();
  tape.acts.assign(1, batch);
  tape.acts.reserve(n_layers + 1);
  for (int l = 0; l < n_layers; ++l) {
    Mat z;
    matmul_nt(tape.acts.back(), net.weights[l], z);
    add_row_vector(z, net.biases[l]);
    apply_activation(z, l == n_layers - 1 ? net.output_act : net.hidden_act);
    tape.acts.push_back(std::move(z));
  }
  return tape.acts.back();
}

Mat forward(const DenseNet& net, const Mat& batch) {
  if (batch.cols != net.input_dim())
    throw std::invalid_argument("forward: input width does not match layer_sizes[0]");
  const int n_layers = net.layer_count();
  Mat h = batch;
  for (int l = 0; l < n_layers; ++l) {
    Mat z;
    matmul_nt(h, net.weights[l], z);
    add_row_vector(z, net.biases[l]);
    apply_activation(z, l == n_layers - 1 ? net.output_act : net.hidden_act);
    h = std::move(z);
  }
  return h;
}

Mat backward(const DenseNet& net, const Tape& tape, const Mat& upstream_grad, Gradients& grads) {
  const int n_layers = net.layer_count();
  if (static_cast<int>(tape.acts.size()) != n_layers + 1)
    throw std::invalid_argument("backward: tape does not match network");
  if (upstream_grad.rows != tape.acts.back().rows || upstream_grad.cols != net.output_dim())
    throw std::invalid_argument("backward: upstream gradient shape mismatch");

  grads.d_weights.resize(n_layers);
  grads.d_biases.resize(n_layers);

  Mat g = upstream_grad;
  for (int l = n_layers - 1; l >= 0; --l) {
    scale_by_activation_grad(g, tape.acts[l + 1], l == n_layers - 1 ? net.output_act : net.hidden_act);
    matmul_tn(g, tape.acts[l], grads.d_weights[l]);
    col_sums(g, grads.d_biases[l]);
    Mat g_prev;
    matmul_nn(g, net.weights[l], g_prev);
    g = std::move(g_prev);
  }
  return g;
}

Mat backward(const DenseNet& net, const Mat& batch, const Mat& upstream_grad, Gradients& grads) {
  Tape tape;
  forward_cached(net, batch, tape);
  return backward(net, tape, upstream_grad, grads);
}

}  // namespace sagail
