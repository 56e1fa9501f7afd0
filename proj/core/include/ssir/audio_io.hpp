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

#ifndef SSIR_AUDIO_IO_HPP_
#define SSIR_AUDIO_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace ssir {

// A mono waveform. Samples are nominally in [-1, 1]; `gain` records the
// factor that peak normalization divided out, so original amplitudes are
// samples * gain.
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = 0;
  double gain = 1.0;

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

enum class SampleFormat { kPcm16, kFloat32 };

// What the source file stored, before mixdown.
struct WavInfo {
  SampleFormat format = SampleFormat::kPcm16;
  int channels = 1;

  int bytes_per_sample() const { return format == SampleFormat::kPcm16 ? 2 : 4; }
};

// RIFF/WAVE decoding. Accepts PCM16 and IEEE float32 (plain or
// WAVE_FORMAT_EXTENSIBLE), any channel count; channels are averaged.
AudioClip decode_wav(std::span<const std::byte> bytes, WavInfo* info = nullptr);
std::vector<std::byte> encode_wav(const AudioClip& clip, SampleFormat format);

AudioClip load_wav(const std::filesystem::path& path, WavInfo* info = nullptr);
void save_wav(const AudioClip& clip, const std::filesystem::path& path,
              SampleFormat format);

// First floor(seconds * sample_rate) samples. Never pads.
AudioClip crop(const AudioClip& clip, double seconds);

// Linear interpolation on the source grid, holding the last sample past the
// end. Output length is round(n * new_rate / old_rate).
AudioClip resample_linear(const AudioClip& clip, int new_rate);

// Scales samples so that max |s| == peak and multiplies the clip's gain by
// old_peak / peak. Throws on an all-zero clip.
AudioClip normalize_peak(const AudioClip& clip, double peak);

}  // namespace ssir

#endif  // SSIR_AUDIO_IO_HPP_
