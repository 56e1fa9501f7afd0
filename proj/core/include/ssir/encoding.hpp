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

#ifndef SSIR_ENCODING_HPP_
#define SSIR_ENCODING_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ssir {

// Fourier positional encoding of a scalar time coordinate:
//   (t, sin(s^0 pi t), cos(s^0 pi t), ..., sin(s^(L-1) pi t), cos(s^(L-1) pi t))
// L = 16, sigma = 2 gives a 33-wide embedding. L = 0 feeds raw t.
struct PeConfig {
  int num_frequencies = 16;
  double sigma = 2.0;

  int dim() const { return 2 * num_frequencies + 1; }
};

void validate(const PeConfig& cfg);

// n evenly spaced points covering [-1, 1] inclusive; n == 1 gives {0}.
std::vector<double> time_grid(std::size_t n);

std::vector<double> positional_encode(double t, const PeConfig& cfg);

// Column i holds the embedding of times[i]. Always evaluated in double and
// rounded once to Scalar, so every caller sees identical coordinates.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> encode_batch(
    std::span<const double> times, const PeConfig& cfg);

}  // namespace ssir

#endif  // SSIR_ENCODING_HPP_
