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

#ifndef SSIR_TESTS_SUPPORT_GOLDEN_HPP_
#define SSIR_TESTS_SUPPORT_GOLDEN_HPP_

// Inputs behind the frozen files in tests/data. Changing anything here
// requires regenerating them with ssir_make_golden.

#include "ssir/codec.hpp"
#include "ssir/metrics.hpp"
#include "ssir/quantizer.hpp"
#include "test_util.hpp"

namespace ssir::testing {

inline NetConfig golden_net() {
  NetConfig cfg;
  cfg.pe.num_frequencies = 2;
  cfg.shared = {4};
  cfg.siamese = {3};
  cfg.omega0 = 30.0;
  cfg.omega = 30.0;
  return cfg;
}

inline constexpr std::uint64_t kGoldenSeed = 11;

inline ContainerHeader golden_header() {
  ContainerHeader h;
  h.flags = kFlagPeakNormalized;
  h.sample_rate = 8000;
  h.num_samples = 8000;
  h.gain = 1.25f;
  h.net_cfg = golden_net();
  return h;
}

inline ContainerFile golden_file(bool quantized) {
  const auto params = init_params<float>(golden_net(), kGoldenSeed);
  ContainerFile f{golden_header(), params};
  if (quantized) f.model = quantize(params);
  return f;
}

// 0.5 s of the three-tone mix at 8 kHz, and the same clip with noise added.
inline std::pair<AudioClip, AudioClip> golden_eval_pair() {
  const AudioClip clean = three_tone_clip(8000, 0.5);
  return {clean, add_noise(clean, 1e-3, 7)};
}

}  // namespace ssir::testing

#endif  // SSIR_TESTS_SUPPORT_GOLDEN_HPP_
