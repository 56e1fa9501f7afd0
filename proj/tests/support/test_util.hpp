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

#ifndef SSIR_TESTS_SUPPORT_TEST_UTIL_HPP_
#define SSIR_TESTS_SUPPORT_TEST_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ssir/audio_io.hpp"
#include "ssir/model.hpp"

#ifdef SSIR_HAS_ORACLE
#include "oracle.hpp"
#endif

namespace ssir::testing {

inline std::vector<double> uniform_values(std::size_t n, std::uint64_t seed, double lo = -1.0,
                                          double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline std::vector<double> white_noise(std::size_t n, double stddev, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, stddev);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline std::vector<double> tone(std::size_t n, int rate, double hz, double amp) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate);
  }
  return v;
}

// 200/450/900 Hz at 0.5/0.3/0.2.
inline AudioClip three_tone_clip(int rate, double seconds) {
  const auto n = static_cast<std::size_t>(std::llround(rate * seconds));
  AudioClip clip;
  clip.sample_rate = rate;
  clip.samples.assign(n, 0.0f);
  const auto a = tone(n, rate, 200.0, 0.5);
  const auto b = tone(n, rate, 450.0, 0.3);
  const auto c = tone(n, rate, 900.0, 0.2);
  for (std::size_t i = 0; i < n; ++i) clip.samples[i] = static_cast<float>(a[i] + b[i] + c[i]);
  return clip;
}

inline std::vector<double> to_double(const std::vector<float>& v) {
  return {v.begin(), v.end()};
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ssir_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

#ifdef SSIR_HAS_ORACLE
inline ssir_oracle::Layer to_oracle(const DenseLayer<double>& l) {
  ssir_oracle::Layer out;
  out.w.resize(l.weight.rows());
  for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < l.weight.cols(); ++c) out.w[r].push_back(l.weight(r, c));
  }
  out.b.assign(l.bias.data(), l.bias.data() + l.bias.size());
  return out;
}

inline ssir_oracle::Net to_oracle(const SiameseParams<double>& p, const NetConfig& cfg) {
  ssir_oracle::Net net;
  net.num_frequencies = cfg.pe.num_frequencies;
  net.sigma = cfg.pe.sigma;
  net.omega0 = cfg.omega0;
  net.omega = cfg.omega;
  for (const auto& l : p.shared) net.shared.push_back(to_oracle(l));
  for (const auto& l : p.head0) net.head0.push_back(to_oracle(l));
  for (const auto& l : p.head1) net.head1.push_back(to_oracle(l));
  return net;
}

// Flattened in tensor_layout order: per layer, weight row-major then bias.
inline std::vector<double> flatten(const ssir_oracle::Net& net) {
  std::vector<double> out;
  for (const auto* branch : {&net.shared, &net.head0, &net.head1}) {
    for (const auto& l : *branch) {
      for (const auto& row : l.w) out.insert(out.end(), row.begin(), row.end());
      out.insert(out.end(), l.b.begin(), l.b.end());
    }
  }
  return out;
}
#endif

template <typename Scalar>
std::vector<double> flatten(const SiameseParams<Scalar>& p) {
  std::vector<double> out;
  for (auto span : tensor_spans(p)) out.insert(out.end(), span.begin(), span.end());
  return out;
}

}  // namespace ssir::testing

#endif  // SSIR_TESTS_SUPPORT_TEST_UTIL_HPP_
