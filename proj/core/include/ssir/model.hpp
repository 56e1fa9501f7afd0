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

#ifndef SSIR_MODEL_HPP_
#define SSIR_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ssir/encoding.hpp"

namespace ssir {

// Architecture of a siamese sine network. Hidden layers are
// sin(omega * (W x + b)); the first hidden layer uses omega0, every later one
// omega. Each head ends in a linear width-1 output layer. An empty `siamese`
// list selects the single-head plain network.
struct NetConfig {
  PeConfig pe;
  std::vector<int> shared{256, 256};
  std::vector<int> siamese{128};
  double omega0 = 100.0;
  double omega = 100.0;

  int input_dim() const { return pe.dim(); }
  bool twin_heads() const { return !siamese.empty(); }
};

void validate(const NetConfig& cfg);

template <typename Scalar>
using RowMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
// Feature-major batch: one column per sample.
template <typename Scalar>
using Batch = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct DenseLayer {
  RowMatrix<Scalar> weight;  // out x in
  Vector<Scalar> bias;       // out
};

template <typename Scalar>
struct SiameseParams {
  std::vector<DenseLayer<Scalar>> shared;
  std::vector<DenseLayer<Scalar>> head0;
  std::vector<DenseLayer<Scalar>> head1;  // empty for a single-head network

  template <typename To>
  SiameseParams<To> cast() const {
    SiameseParams<To> out;
    auto conv = [](const std::vector<DenseLayer<Scalar>>& in) {
      std::vector<DenseLayer<To>> layers;
      layers.reserve(in.size());
      for (const auto& l : in) {
        layers.push_back({l.weight.template cast<To>(), l.bias.template cast<To>()});
      }
      return layers;
    };
    out.shared = conv(shared);
    out.head0 = conv(head0);
    out.head1 = conv(head1);
    return out;
  }

  // Same shapes, zero values.
  SiameseParams zeros_like() const {
    SiameseParams out = *this;
    for (auto* branch : {&out.shared, &out.head0, &out.head1}) {
      for (auto& l : *branch) {
        l.weight.setZero();
        l.bias.setZero();
      }
    }
    return out;
  }
};

// Canonical tensor order used everywhere parameters are flattened: shared
// layers, then head 0, then head 1; weight before bias within a layer.
struct TensorInfo {
  std::string name;
  std::vector<std::uint32_t> shape;

  std::size_t size() const;
};

std::vector<TensorInfo> tensor_layout(const NetConfig& cfg);

template <typename Scalar>
std::vector<std::span<Scalar>> tensor_spans(SiameseParams<Scalar>& params);
template <typename Scalar>
std::vector<std::span<const Scalar>> tensor_spans(
    const SiameseParams<Scalar>& params);

template <typename Scalar>
bool bit_equal(const SiameseParams<Scalar>& a, const SiameseParams<Scalar>& b);

std::size_t param_count(const NetConfig& cfg);
template <typename Scalar>
std::size_t param_count(const SiameseParams<Scalar>& params);

// Sine-network initialization: the first layer draws from
// U(-1/fan_in, 1/fan_in), every later layer (output included) from
// U(-sqrt(6/fan_in)/omega, +sqrt(6/fan_in)/omega). Biases start at zero.
// Shared trunk and both heads use independent RNG streams derived from seed.
template <typename Scalar>
SiameseParams<Scalar> init_params(const NetConfig& cfg, std::uint64_t seed);

// All-zero parameters with the shapes `cfg` implies.
template <typename Scalar>
SiameseParams<Scalar> zero_params(const NetConfig& cfg);

// Throws ErrorCode::kShapeMismatch naming the first offending layer.
template <typename Scalar>
void check_shapes(const SiameseParams<Scalar>& params, const NetConfig& cfg);

template <typename Scalar>
struct HeadOutputs {
  Vector<Scalar> head0;
  Vector<Scalar> head1;  // empty for a single-head network
};

template <typename Scalar>
HeadOutputs<Scalar> forward(const SiameseParams<Scalar>& params,
                            const NetConfig& cfg, const Batch<Scalar>& coords);

// Activations kept for backpropagation. `cos_pre` holds cos of the scaled
// pre-activation and is empty for the linear output layer.
template <typename Scalar>
struct LayerTape {
  Batch<Scalar> input;
  Batch<Scalar> cos_pre;
  Scalar omega = 0;
};

template <typename Scalar>
struct ForwardTape {
  std::vector<LayerTape<Scalar>> shared;
  std::vector<LayerTape<Scalar>> head0;
  std::vector<LayerTape<Scalar>> head1;
  HeadOutputs<Scalar> out;
};

template <typename Scalar>
ForwardTape<Scalar> forward_with_tape(const SiameseParams<Scalar>& params,
                                      const NetConfig& cfg,
                                      const Batch<Scalar>& coords);

// Same, reusing the buffers already held by `tape`.
template <typename Scalar>
void forward_with_tape(const SiameseParams<Scalar>& params, const NetConfig& cfg,
                       const Batch<Scalar>& coords, ForwardTape<Scalar>& tape);

// Samples per block in evaluate(). Fixed so that outputs for a given grid do
// not depend on thread count.
inline constexpr std::size_t kEvalChunk = 4096;

// Encodes `times` and runs forward() in fixed-size blocks.
template <typename Scalar>
HeadOutputs<Scalar> evaluate(const SiameseParams<Scalar>& params,
                             const NetConfig& cfg, std::span<const double> times,
                             int workers = 0);

}  // namespace ssir

#endif  // SSIR_MODEL_HPP_
