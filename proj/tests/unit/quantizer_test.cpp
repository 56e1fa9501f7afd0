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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ssir/error.hpp"
#include "test_util.hpp"

namespace ssir {
namespace {

float ulp(float v) {
  const float a = std::fabs(v);
  return std::nextafter(a, std::numeric_limits<float>::infinity()) - a;
}

// Checks the half-step bound element by element; returns the worst excess.
void expect_within_half_step(std::span<const float> v, const QuantTensor& q) {
  const auto back = dequantize_tensor(q);
  ASSERT_EQ(back.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const float bound = q.scale / 2 + ulp(std::max(std::fabs(v[i]), std::fabs(back[i])));
    ASSERT_LE(std::fabs(back[i] - v[i]), bound) << "element " << i << " value " << v[i];
  }
}

TEST(QuantizeTensor, ConstantTensorsDecodeExactly) {
  for (float c : {0.5f, -0.3f, 0.0f, 1e-20f, -7.25f}) {
    const std::vector<float> v(5, c);
    const auto q = quantize_tensor(v, {5});
    EXPECT_GT(q.scale, 0.0f);
    for (auto code : q.data) EXPECT_EQ(code, q.data[0]);
    for (float x : dequantize_tensor(q)) EXPECT_EQ(x, c);
  }
}

TEST(QuantizeTensor, SpecFormulaWithExactScale) {
  // Range 255 gives scale 1 exactly, so every step below is exact.
  const auto q = quantize_tensor(std::vector<float>{0.0f, 100.0f, 255.0f}, {3});
  EXPECT_EQ(q.scale, 1.0f);
  EXPECT_EQ(q.zero_point, -128);
  EXPECT_EQ(q.data, (std::vector<std::int8_t>{-128, -28, 127}));

  // zero_point = round(-128 + 2.5) = round(-125.5) -> -126 (ties to even);
  // codes -2.5 - 126 = -128.5 -> -128 and 252.5 - 126 = 126.5 -> 126.
  const auto t = quantize_tensor(std::vector<float>{-2.5f, 252.5f}, {2});
  EXPECT_EQ(t.scale, 1.0f);
  EXPECT_EQ(t.zero_point, -126);
  EXPECT_EQ(t.data, (std::vector<std::int8_t>{-128, 126}));
  EXPECT_EQ(dequantize_tensor(t), (std::vector<float>{-2.0f, 252.0f}));
}

TEST(QuantizeTensor, DenseGridOverUnitRange) {
  std::vector<float> v;
  for (int i = 0; i <= 200000; ++i) v.push_back(static_cast<float>(-1.0 + i * 1e-5));
  v.back() = 1.0f;
  const auto q = quantize_tensor(v, {static_cast<std::uint32_t>(v.size())});
  EXPECT_FLOAT_EQ(q.scale / 2, 1.0f / 255.0f);
  expect_within_half_step(v, q);
}

TEST(QuantizeTensor, BoundAndIdempotenceProperty) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 400)(rng);
    const double spread = std::pow(10.0, std::uniform_real_distribution<double>(-6, 2)(rng));
    // A third of the trials put the range far away from zero.
    const double offset =
        trial % 3 == 0 ? std::uniform_real_distribution<double>(-50, 50)(rng) * spread : 0.0;
    std::vector<float> v;
    for (double x : testing::uniform_values(n, trial, -spread, spread)) {
      v.push_back(static_cast<float>(x + offset));
    }
    const auto q = quantize_tensor(v, {static_cast<std::uint32_t>(n)});
    EXPECT_GT(q.scale, 0.0f);
    expect_within_half_step(v, q);
    const auto back = dequantize_tensor(q);
    const auto again = quantize_tensor(back, q.shape);
    EXPECT_EQ(again.data, q.data) << "trial " << trial;
  }
}

TEST(QuantizeTensor, RangeAwayFromZeroKeepsBound) {
  const std::vector<float> v{1.0f, 1.05f, 1.1f};
  const auto q = quantize_tensor(v, {3});
  expect_within_half_step(v, q);
  EXPECT_EQ(q.zero_point, -128);
}

TEST(QuantizeTensor, NonFiniteNamesTensor) {
  const std::vector<float> v{0.0f, std::numeric_limits<float>::infinity()};
  try {
    quantize_tensor(v, {2}, "head0[1].weight");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
    EXPECT_NE(std::string(e.what()).find("head0[1].weight"), std::string::npos);
  }
}

NetConfig small_cfg() {
  NetConfig cfg;
  cfg.pe.num_frequencies = 4;
  cfg.shared = {16};
  cfg.siamese = {8};
  return cfg;
}

TEST(Quantize, LayoutSizesAndNames) {
  const auto cfg = small_cfg();
  auto p = init_params<float>(cfg, 1);
  const auto qs = quantize(p);
  const auto layout = tensor_layout(cfg);
  ASSERT_EQ(qs.size(), layout.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    EXPECT_EQ(qs[i].shape, layout[i].shape);
    total += qs[i].data.size();
  }
  EXPECT_EQ(total, param_count(cfg));

  p.head1[0].bias(3) = std::numeric_limits<float>::quiet_NaN();
  try {
    quantize(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("head1[0].bias"), std::string::npos) << e.what();
  }
}

TEST(Dequantize, RoundTripBoundsAndZeroTensor) {
  const auto cfg = small_cfg();
  const auto p = init_params<float>(cfg, 3);
  const auto qs = quantize(p);
  const auto back = dequantize(qs, cfg);
  const auto orig = tensor_spans(p);
  for (std::size_t i = 0; i < qs.size(); ++i) expect_within_half_step(orig[i], qs[i]);
  // Biases start at zero and must come back as exact zeros.
  for (const auto& l : back.shared) EXPECT_TRUE(l.bias.isZero(0.0f));
  const auto out = forward(back, cfg, encode_batch<float>(time_grid(9), cfg.pe));
  EXPECT_EQ(out.head0.size(), 9);
  EXPECT_EQ(quantize(back)[0].data, qs[0].data);
}

TEST(Dequantize, ShapeErrors) {
  const auto cfg = small_cfg();
  auto qs = quantize(init_params<float>(cfg, 3));
  auto fewer = qs;
  fewer.pop_back();
  EXPECT_THROW(dequantize(fewer, cfg), Error);
  qs[2].shape = {8, 15};
  try {
    dequantize(qs, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
    EXPECT_NE(std::string(e.what()).find("head0[0].weight"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace ssir
