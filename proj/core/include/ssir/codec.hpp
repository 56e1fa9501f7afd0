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

#ifndef SSIR_CODEC_HPP_
#define SSIR_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "ssir/model.hpp"
#include "ssir/quantizer.hpp"

namespace ssir {

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::uint16_t kFlagQuantized = 1u << 0;
inline constexpr std::uint16_t kFlagPeakNormalized = 1u << 1;

// Decode-time settings frozen into every file so that output does not depend
// on the defaults of whichever tool reads it.
struct DecodeSettings {
  float alpha = 2.0f;
  std::uint32_t n_fft = 2048;
  std::uint32_t hop = 512;
  float n_std_thresh = 1.5f;

  bool operator==(const DecodeSettings&) const = default;
};

struct ContainerHeader {
  std::uint16_t version = kFormatVersion;
  std::uint16_t flags = 0;
  std::uint32_t sample_rate = 0;
  std::uint64_t num_samples = 0;
  float gain = 1.0f;
  NetConfig net_cfg;
  DecodeSettings decode;

  bool quantized() const { return (flags & kFlagQuantized) != 0; }
  bool peak_normalized() const { return (flags & kFlagPeakNormalized) != 0; }
};

using ModelPayload = std::variant<std::vector<QuantTensor>, SiameseParams<float>>;

struct ContainerFile {
  ContainerHeader header;
  ModelPayload model;
};

// Serializes header + tensors (little-endian, tensor_layout() order). The
// quantized flag is taken from the payload alternative.
std::vector<std::byte> encode_file(const ContainerFile& file);

// Exact inverse of encode_file. Distinct ErrorCodes for bad magic,
// unsupported version, truncated input and shape-chain mismatch.
ContainerFile decode_file(std::span<const std::byte> bytes);

// Size in bytes of the fixed header for a given architecture.
std::size_t header_size(const NetConfig& cfg);
// Total file size: header + per tensor (1 + 4 * rank [+ 5 if quantized]) +
// payload (1 or 4 bytes per parameter).
std::size_t file_size(const NetConfig& cfg, bool quantized);

// Model weights as float parameters, dequantizing if needed.
SiameseParams<float> materialize(const ContainerFile& file);

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);
std::vector<std::byte> read_file(const std::filesystem::path& path);

}  // namespace ssir

#endif  // SSIR_CODEC_HPP_
