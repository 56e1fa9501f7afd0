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

#include "ssir/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssir/error.hpp"

namespace ssir {

QuantTensor quantize_tensor(std::span<const float> values,
                            std::vector<std::uint32_t> shape,
                            std::string_view name) {
  QuantTensor q;
  q.shape = std::move(shape);
  q.data.resize(values.size());
  if (values.empty()) return q;

  float lo = values[0];
  float hi = values[0];
  for (float v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFinite,
                  "quantize: non-finite value in " + std::string(name));
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  float scale = (hi - lo) / 255.0f;
  if (!(scale > 0.0f)) scale = lo != 0.0f ? std::fabs(lo) : 1.0f;

  // nearbyint honours the default round-to-nearest-even mode.
  double zp = std::nearbyint(-128.0 - double{lo} / scale);
  if (hi > lo && (zp < -128.0 || zp > 127.0)) {
    // The range sits too far from zero for an int8 zero point; stretch it
    // to include zero so the half-step bound still holds.
    lo = std::min(lo, 0.0f);
    hi = std::max(hi, 0.0f);
    scale = (hi - lo) / 255.0f;
    zp = std::nearbyint(-128.0 - double{lo} / scale);
  }
  zp = std::clamp(zp, -128.0, 127.0);
  q.scale = scale;
  q.zero_point = static_cast<std::int8_t>(zp);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double code = std::nearbyint(double{values[i]} / scale + zp);
    q.data[i] = static_cast<std::int8_t>(std::clamp(code, -128.0, 127.0));
  }
  return q;
}

std::vector<float> dequantize_tensor(const QuantTensor& q) {
  std::vector<float> out(q.data.size());
  for (std::size_t i = 0; i < q.data.size(); ++i) {
    out[i] = q.scale * static_cast<float>(int{q.data[i]} - int{q.zero_point});
  }
  return out;
}

std::vector<QuantTensor> quantize(const SiameseParams<float>& params) {
  const auto spans = tensor_spans(params);
  std::vector<QuantTensor> out;
  out.reserve(spans.size());
  std::size_t t = 0;
  for (const auto* branch : {&params.shared, &params.head0, &params.head1}) {
    const char* bname = branch == &params.shared  ? "shared"
                        : branch == &params.head0 ? "head0"
                                                  : "head1";
    for (std::size_t i = 0; i < branch->size(); ++i) {
      const auto& layer = (*branch)[i];
      const std::string prefix = std::string(bname) + "[" + std::to_string(i) + "]";
      out.push_back(quantize_tensor(
          spans[t++],
          {static_cast<std::uint32_t>(layer.weight.rows()),
           static_cast<std::uint32_t>(layer.weight.cols())},
          prefix + ".weight"));
      out.push_back(quantize_tensor(
          spans[t++], {static_cast<std::uint32_t>(layer.bias.size())},
          prefix + ".bias"));
    }
  }
  return out;
}

SiameseParams<float> dequantize(std::span<const QuantTensor> tensors,
                                const NetConfig& cfg) {
  const auto layout = tensor_layout(cfg);
  if (tensors.size() != layout.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "dequantize: expected " + std::to_string(layout.size()) +
                    " tensors, got " + std::to_string(tensors.size()));
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (tensors[i].shape != layout[i].shape ||
        tensors[i].data.size() != layout[i].size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "dequantize: tensor " + layout[i].name +
                      " does not match the configured shape");
    }
  }

  SiameseParams<float> p = zero_params<float>(cfg);
  auto spans = tensor_spans(p);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto values = dequantize_tensor(tensors[i]);
    std::copy(values.begin(), values.end(), spans[i].begin());
  }
  return p;
}

}  // namespace ssir
