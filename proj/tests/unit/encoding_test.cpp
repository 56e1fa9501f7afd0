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

#include "ssir/encoding.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ssir/error.hpp"

namespace ssir {
namespace {

TEST(TimeGrid, Examples) {
  EXPECT_EQ(time_grid(3), (std::vector<double>{-1.0, 0.0, 1.0}));
  EXPECT_EQ(time_grid(2), (std::vector<double>{-1.0, 1.0}));
  EXPECT_EQ(time_grid(1), (std::vector<double>{0.0}));
  const auto five = time_grid(5);
  for (std::size_t i = 1; i < five.size(); ++i) EXPECT_EQ(five[i] - five[i - 1], 0.5);
  EXPECT_THROW(time_grid(0), Error);
}

TEST(TimeGrid, SymmetricAndEndpointsExact) {
  for (std::size_t n : {7u, 8000u, 22050u, 220500u}) {
    const auto t = time_grid(n);
    EXPECT_EQ(t.front(), -1.0);
    EXPECT_EQ(t.back(), 1.0);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(t[i], -t[n - 1 - i]);
  }
}

TEST(PositionalEncode, ZeroGivesSinZeroCosOne) {
  const auto e = positional_encode(0.0, PeConfig{});
  ASSERT_EQ(e.size(), 33u);
  EXPECT_EQ(e[0], 0.0);
  for (int k = 0; k < 16; ++k) {
    EXPECT_EQ(e[1 + 2 * k], 0.0);
    EXPECT_EQ(e[2 + 2 * k], 1.0);
  }
}

TEST(PositionalEncode, FirstPairAtOne) {
  const auto e = positional_encode(1.0, PeConfig{16, 2.0});
  EXPECT_NEAR(e[1], 0.0, 1e-12);
  EXPECT_NEAR(e[2], -1.0, 1e-12);
}

TEST(PositionalEncode, LayoutMatchesDirectFormula) {
  const PeConfig cfg{5, 1.7};
  const double t = 0.3141;
  const auto e = positional_encode(t, cfg);
  ASSERT_EQ(e.size(), 11u);
  for (int k = 0; k < 5; ++k) {
    const double arg = std::pow(1.7, k) * std::numbers::pi * t;
    EXPECT_NEAR(e[1 + 2 * k], std::sin(arg), 1e-15);
    EXPECT_NEAR(e[2 + 2 * k], std::cos(arg), 1e-15);
  }
}

TEST(PositionalEncode, DimensionRangeAndParityProperty) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> tdist(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const PeConfig cfg{trial % 20, 1.0 + (trial % 7) * 0.5};
    const double t = tdist(rng);
    const auto a = positional_encode(t, cfg);
    const auto b = positional_encode(-t, cfg);
    ASSERT_EQ(a.size(), static_cast<std::size_t>(2 * cfg.num_frequencies + 1));
    EXPECT_EQ(b[0], -a[0]);
    for (std::size_t i = 1; i < a.size(); ++i) {
      EXPECT_LE(std::fabs(a[i]), 1.0);
      if (i % 2 == 1) {
        EXPECT_EQ(b[i], -a[i]);
      } else {
        EXPECT_EQ(b[i], a[i]);
      }
    }
  }
}

TEST(PositionalEncode, RejectsBadConfig) {
  EXPECT_THROW(positional_encode(0.0, PeConfig{-1, 2.0}), Error);
  EXPECT_THROW(positional_encode(0.0, PeConfig{4, 0.0}), Error);
}

TEST(EncodeBatch, ColumnsMatchSingleEncode) {
  const PeConfig cfg;
  const auto t = time_grid(17);
  const auto d = encode_batch<double>(t, cfg);
  const auto f = encode_batch<float>(t, cfg);
  ASSERT_EQ(d.rows(), 33);
  ASSERT_EQ(d.cols(), 17);
  for (std::size_t j = 0; j < t.size(); ++j) {
    const auto e = positional_encode(t[j], cfg);
    for (std::size_t i = 0; i < e.size(); ++i) {
      EXPECT_EQ(d(i, j), e[i]);
      EXPECT_EQ(f(i, j), static_cast<float>(e[i]));
    }
  }
}

}  // namespace
}  // namespace ssir
