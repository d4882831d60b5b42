#include <benchmark/benchmark.h>

#include "sagail/adam.hpp"
#include "sagail/net.hpp"

using namespace sagail;

namespace {

DenseNet make_net(const std::vector<int>& sizes) {
  Rng rng(1);
  return DenseNet::make(sizes, Activation::relu, Activation::identity, rng);
}

Mat make_batch(int rows, int cols) {
  Rng rng(2);
  Mat x(rows, cols);
  for (double& v : x.a) v = rng.uniform(-1.0, 1.0);
  return x;
}

void BM_ForwardDesk(benchmark::State& state) {
  const DenseNet net = make_net({8, 64, 64, 1});
  const Mat x = make_batch(static_cast<int>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(forward(net, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardDesk)->Arg(256)->Arg(1024);

void BM_ForwardPaper(benchmark::State& state) {
  const DenseNet net = make_net({32, 256, 256, 256, 256, 1});
  const Mat x = make_batch(static_cast<int>(state.range(0)), 32);
  for (auto _ : state) benchmark::DoNotOptimize(forward(net, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardPaper)->Arg(512);

void BM_ForwardBackwardAdam(benchmark::State& state) {
  DenseNet net = make_net({8, 64, 64, 1});
  AdamState opt = AdamState::for_net(net, 1e-3);
  const Mat x = make_batch(static_cast<int>(state.range(0)), 8);
  Mat upstream(static_cast<int>(state.range(0)), 1);
  upstream.fill(1.0 / state.range(0));
  for (auto _ : state) {
    Tape tape;
    forward_cached(net, x, tape);
    Gradients grads;
    backward(net, tape, upstream, grads);
    adam_step(net, grads, opt);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardBackwardAdam)->Arg(256);

}  // namespace
