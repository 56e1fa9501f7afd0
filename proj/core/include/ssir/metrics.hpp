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

#ifndef SSIR_METRICS_HPP_
#define SSIR_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "ssir/audio_io.hpp"
#include "ssir/spectral.hpp"

namespace ssir {

struct EvalResult {
  double mse = 0.0;
  double snr_db = 0.0;  // +infinity for an exact match
  double lsd = 0.0;
  std::optional<double> compression_ratio;
};

double mse(std::span<const double> ref, std::span<const double> test);

// 10 log10(sum ref^2 / sum (ref - test)^2); +infinity when test == ref.
double snr(std::span<const double> ref, std::span<const double> test);

// Mean over frames of the RMS over bins of the dB magnitude difference, both
// magnitudes floored at -120 dB.
double lsd(std::span<const double> ref, std::span<const double> test,
           const StftConfig& cfg = {});

double compression_ratio(std::uint64_t original_bytes,
                         std::uint64_t compressed_bytes);

// Adds i.i.d. N(0, variance) noise, seeded.
AudioClip add_noise(const AudioClip& clip, double variance, std::uint64_t seed);

EvalResult evaluate_pair(std::span<const double> ref, std::span<const double> test,
                         const StftConfig& cfg = {});

// "mse=... snr_db=... lsd=..." on one line; snr prints "inf" on exact match.
std::string format_key_value(const EvalResult& r);

}  // namespace ssir

#endif  // SSIR_METRICS_HPP_
