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

#ifndef SSIR_TOOLS_COMMANDS_HPP_
#define SSIR_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ssir/audio_io.hpp"
#include "ssir/codec.hpp"
#include "ssir/metrics.hpp"
#include "ssir/model.hpp"
#include "ssir/trainer.hpp"

namespace ssir::cli {

// Parses "NxW" layer notation ("2x256" -> {256, 256}); "0" or "" is empty.
// Throws ErrorCode::kInvalidArgument on anything else.
std::vector<int> parse_layers(const std::string& spec);

struct CompressOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  NetConfig net;
  TrainConfig train;
  DecodeSettings decode;
  double crop_seconds = 10.0;
  int sample_rate = 22050;  // resample target; 0 keeps the source rate
  bool normalize = true;
  double peak = 0.95;
  bool quantize = true;
  int log_every = 100;
};

struct CompressSummary {
  std::size_t file_bytes = 0;
  std::uint64_t source_bytes = 0;
  double compression_ratio = 0.0;
  TrainReport report;
};

CompressSummary compress(const CompressOptions& opts, std::ostream& log);

enum class HeadSelect { kHead0, kHead1, kMean };

struct DecodeOptions {
  bool denoise = true;
  std::optional<double> alpha;     // header value when absent
  HeadSelect head = HeadSelect::kHead0;
  std::optional<int> sample_rate;  // header rate when absent
};

// Evaluates the stored network on a time grid at the requested rate,
// optionally gates it with the siamese noise estimate, and re-applies gain.
AudioClip decode_model(const ContainerFile& file, const DecodeOptions& opts);

struct DecompressOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  DecodeOptions decode;
  SampleFormat format = SampleFormat::kFloat32;
};

void decompress(const DecompressOptions& opts, std::ostream& log);

// One-line JSON object; an exact match reports snr_db as the string "inf".
std::string format_json(const EvalResult& r);

// Resamples to the lower rate when rates differ and compares the common
// prefix. With `ssir_file`, also reports compression ratio against the
// reference's stored size.
EvalResult eval(const std::filesystem::path& ref, const std::filesystem::path& test,
                const std::optional<std::filesystem::path>& ssir_file = std::nullopt);

// Writes the log-mel spectrogram of `input` as an 8-bit PGM.
void spectrogram(const std::filesystem::path& input,
                 const std::filesystem::path& output, int n_mels);

struct NoiseDemoOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  double variance = 1e-3;
  std::uint64_t seed = 0;
  std::optional<std::string> pgm_prefix;  // writes <prefix>_clean.pgm, _noisy.pgm
  int n_mels = 128;
};

// Adds Gaussian noise and reports waveform MSE next to log-spectral distance.
EvalResult noise_demo(const NoiseDemoOptions& opts, std::ostream& log);

}  // namespace ssir::cli

#endif  // SSIR_TOOLS_COMMANDS_HPP_
