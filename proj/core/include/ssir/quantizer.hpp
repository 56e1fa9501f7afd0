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

#ifndef SSIR_QUANTIZER_HPP_
#define SSIR_QUANTIZER_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ssir/model.hpp"

namespace ssir {

// Per-tensor affine int8 tensor: value = scale * (q - zero_point).
struct QuantTensor {
  std::vector<std::int8_t> data;
  std::vector<std::uint32_t> shape;
  float scale = 1.0f;
  std::int8_t zero_point = 0;

  bool operator==(const QuantTensor&) const = default;
};

// A quantized model together with what a decoder needs to rebuild audio.
struct QuantizedModel {
  NetConfig net_cfg;
  float gain = 1.0f;
  std::uint32_t sample_rate = 0;
  std::uint64_t num_samples = 0;
  std::vector<QuantTensor> tensors;
};

// scale = (max - min) / 255, zero_point = round(-128 - min / scale), codes
// round(v / scale + zero_point) clamped to int8. Rounding is half-to-even.
// A constant tensor uses scale = |value| (1 for zero) so it decodes exactly.
QuantTensor quantize_tensor(std::span<const float> values,
                            std::vector<std::uint32_t> shape,
                            std::string_view name = "tensor");
std::vector<float> dequantize_tensor(const QuantTensor& q);

// Tensors follow tensor_layout() order. Throws ErrorCode::kNonFinite naming
// the tensor if any weight is NaN or infinite.
std::vector<QuantTensor> quantize(const SiameseParams<float>& params);
SiameseParams<float> dequantize(std::span<const QuantTensor> tensors,
                                const NetConfig& cfg);

}  // namespace ssir

#endif  // SSIR_QUANTIZER_HPP_
