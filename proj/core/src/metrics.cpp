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

#include "ssir/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

#include "ssir/error.hpp"

namespace ssir {
namespace {

void same_length(std::span<const double> a, std::span<const double> b,
                 const char* what) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": length mismatch (" +
                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

double mse(std::span<const double> ref, std::span<const double> test) {
  same_length(ref, test, "mse");
  if (ref.empty()) throw Error(ErrorCode::kInvalidArgument, "mse: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = ref[i] - test[i];
    s += d * d;
  }
  return s / static_cast<double>(ref.size());
}

double snr(std::span<const double> ref, std::span<const double> test) {
  same_length(ref, test, "snr");
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    signal += ref[i] * ref[i];
    const double d = ref[i] - test[i];
    error += d * d;
  }
  if (signal == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "snr: reference is all zero");
  }
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / error);
}

double lsd(std::span<const double> ref, std::span<const double> test,
           const StftConfig& cfg) {
  same_length(ref, test, "lsd");
  const auto a = stft(ref, cfg);
  const auto b = stft(test, cfg);
  double total = 0.0;
  for (Eigen::Index f = 0; f < a.frames(); ++f) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < a.bins(); ++k) {
      const double da = 20.0 * std::log10(std::max(std::abs(a.coeffs(k, f)), kMagnitudeFloor));
      const double db = 20.0 * std::log10(std::max(std::abs(b.coeffs(k, f)), kMagnitudeFloor));
      acc += (da - db) * (da - db);
    }
    total += std::sqrt(acc / static_cast<double>(a.bins()));
  }
  return total / static_cast<double>(a.frames());
}

double compression_ratio(std::uint64_t original_bytes,
                         std::uint64_t compressed_bytes) {
  if (original_bytes == 0 || compressed_bytes == 0) {
    throw Error(ErrorCode::kInvalidArgument, "compression_ratio: sizes must be > 0");
  }
  return static_cast<double>(original_bytes) / static_cast<double>(compressed_bytes);
}

AudioClip add_noise(const AudioClip& clip, double variance, std::uint64_t seed) {
  if (!(variance >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "add_noise: variance must be >= 0");
  }
  AudioClip out = clip;
  if (variance == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, std::sqrt(variance));
  for (float& s : out.samples) s = static_cast<float>(s + dist(rng));
  return out;
}

EvalResult evaluate_pair(std::span<const double> ref, std::span<const double> test,
                         const StftConfig& cfg) {
  EvalResult r;
  r.mse = mse(ref, test);
  r.snr_db = snr(ref, test);
  r.lsd = lsd(ref, test, cfg);
  return r;
}

std::string format_key_value(const EvalResult& r) {
  std::string s = "mse=" + number(r.mse) + " snr_db=" + number(r.snr_db) +
                  " lsd=" + number(r.lsd);
  if (r.compression_ratio) s += " compression_ratio=" + number(*r.compression_ratio);
  return s;
}

}  // namespace ssir
