// Copyright 2026 The ssir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ssir/codec.hpp"
#include "ssir/encoding.hpp"
#include "ssir/model.hpp"
#include "ssir/quantizer.hpp"
#include "ssir/spectral.hpp"
#include "ssir/trainer.hpp"

namespace {

using namespace ssir;

NetConfig net(int width) {
  NetConfig cfg;
  cfg.shared = {width, width};
  cfg.siamese = {width / 2};
  return cfg;
}

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist(0.0, 0.3);
  std::vector<double> x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

// Arg 0: hidden width; arg 1: samples.
void BM_Evaluate(benchmark::State& state) {
  const auto cfg = net(static_cast<int>(state.range(0)));
  const auto params = init_params<float>(cfg, 1);
  const auto t = time_grid(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(params, cfg, t));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Evaluate)->Args({64, 8000})->Args({256, 22050})->Unit(benchmark::kMillisecond);

void BM_LossAndGrad(benchmark::State& state) {
  const auto cfg = net(static_cast<int>(state.range(0)));
  const auto params = init_params<float>(cfg, 1);
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto coords = encode_batch<float>(time_grid(n), cfg.pe);
  const Vector<float> y = Vector<float>::Random(static_cast<Eigen::Index>(n)) * 0.5f;
  GradWorkspace<float> ws;
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_and_grad(params, cfg, coords, y, 2048, 0, &ws));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_LossAndGrad)->Args({64, 8000})->Args({256, 22050})->Unit(benchmark::kMillisecond);

void BM_Stft(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stft(x, StftConfig{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Stft)->Arg(22050)->Arg(220500)->Unit(benchmark::kMillisecond);

void BM_SpectralGate(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  const auto n = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gate(x, std::span<const double>(n)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SpectralGate)->Arg(220500)->Unit(benchmark::kMillisecond);

void BM_QuantizeEncode(benchmark::State& state) {
  const auto cfg = net(256);
  const auto params = init_params<float>(cfg, 1);
  ContainerFile file;
  file.header.sample_rate = 22050;
  file.header.num_samples = 220500;
  file.header.net_cfg = cfg;
  for (auto _ : state) {
    file.model = quantize(params);
    benchmark::DoNotOptimize(encode_file(file));
  }
}
BENCHMARK(BM_QuantizeEncode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
