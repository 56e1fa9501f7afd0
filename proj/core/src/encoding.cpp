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

#include <cmath>
#include <numbers>
#include <string>

#include "ssir/error.hpp"

namespace ssir {

void validate(const PeConfig& cfg) {
  if (cfg.num_frequencies < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "encoding: number of frequencies must be >= 0");
  }
  if (!(cfg.sigma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "encoding: sigma must be > 0");
  }
}

std::vector<double> time_grid(std::size_t n) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "time_grid: n must be >= 1");
  }
  std::vector<double> t(n, 0.0);
  if (n == 1) return t;
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    // Written as (2i - (n-1)) / (n-1) so the grid is exactly symmetric.
    t[i] = (2.0 * static_cast<double>(i) - denom) / denom;
  }
  return t;
}

namespace {

std::vector<double> frequencies(const PeConfig& cfg) {
  std::vector<double> f(static_cast<std::size_t>(cfg.num_frequencies));
  for (int k = 0; k < cfg.num_frequencies; ++k) {
    f[static_cast<std::size_t>(k)] = std::pow(cfg.sigma, k) * std::numbers::pi;
  }
  return f;
}

}  // namespace

std::vector<double> positional_encode(double t, const PeConfig& cfg) {
  validate(cfg);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cfg.dim()));
  out.push_back(t);
  for (double w : frequencies(cfg)) {
    out.push_back(std::sin(w * t));
    out.push_back(std::cos(w * t));
  }
  return out;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> encode_batch(
    std::span<const double> times, const PeConfig& cfg) {
  validate(cfg);
  const auto freqs = frequencies(cfg);
  const auto n = static_cast<Eigen::Index>(times.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(cfg.dim(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = times[static_cast<std::size_t>(j)];
    out(0, j) = static_cast<Scalar>(t);
    Eigen::Index row = 1;
    for (double w : freqs) {
      out(row++, j) = static_cast<Scalar>(std::sin(w * t));
      out(row++, j) = static_cast<Scalar>(std::cos(w * t));
    }
  }
  return out;
}

template Eigen::MatrixXf encode_batch<float>(std::span<const double>,
                                             const PeConfig&);
template Eigen::MatrixXd encode_batch<double>(std::span<const double>,
                                              const PeConfig&);

}  // namespace ssir
