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

#include "ssir/audio_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "ssir/error.hpp"

namespace ssir {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  bool has(std::size_t n) const { return pos_ + n <= bytes_.size(); }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  template <typename T>
  T read(const char* what) {
    if (!has(sizeof(T))) {
      throw Error(ErrorCode::kIo,
                  std::string("wav: truncated while reading ") + what);
    }
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
      v = byteswap(v);
    }
    return v;
  }

  std::array<char, 4> tag(const char* what) {
    if (!has(4)) {
      throw Error(ErrorCode::kIo,
                  std::string("wav: truncated while reading ") + what);
    }
    std::array<char, 4> t;
    std::memcpy(t.data(), bytes_.data() + pos_, 4);
    pos_ += 4;
    return t;
  }

  std::span<const std::byte> take(std::size_t n) {
    n = std::min(n, remaining());
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  void skip(std::size_t n) { pos_ = std::min(bytes_.size(), pos_ + n); }

 private:
  template <typename T>
  static T byteswap(T v) {
    auto* p = reinterpret_cast<unsigned char*>(&v);
    std::reverse(p, p + sizeof(T));
    return v;
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

bool tag_is(const std::array<char, 4>& t, const char* s) {
  return std::memcmp(t.data(), s, 4) == 0;
}

template <typename T>
void put(std::vector<std::byte>& out, T v) {
  std::array<std::byte, sizeof(T)> raw;
  std::memcpy(raw.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(raw.begin(), raw.end());
  }
  out.insert(out.end(), raw.begin(), raw.end());
}

void put_tag(std::vector<std::byte>& out, const char* s) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(s[i]));
}

}  // namespace

AudioClip decode_wav(std::span<const std::byte> bytes, WavInfo* info) {
  ByteReader r(bytes);
  if (!tag_is(r.tag("RIFF id"), "RIFF")) {
    throw Error(ErrorCode::kUnsupportedFormat, "wav: missing RIFF header");
  }
  r.read<std::uint32_t>("RIFF size");
  if (!tag_is(r.tag("WAVE id"), "WAVE")) {
    throw Error(ErrorCode::kUnsupportedFormat, "wav: RIFF form is not WAVE");
  }

  bool have_fmt = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  std::span<const std::byte> data;
  bool have_data = false;

  while (r.remaining() >= 8) {
    auto id = r.tag("chunk id");
    auto size = r.read<std::uint32_t>("chunk size");
    if (tag_is(id, "fmt ")) {
      if (size < 16 || !r.has(16)) {
        throw Error(ErrorCode::kIo, "wav: fmt chunk too short");
      }
      const std::size_t start = r.pos();
      format = r.read<std::uint16_t>("fmt.audio_format");
      channels = r.read<std::uint16_t>("fmt.num_channels");
      rate = r.read<std::uint32_t>("fmt.sample_rate");
      r.read<std::uint32_t>("fmt.byte_rate");
      r.read<std::uint16_t>("fmt.block_align");
      bits = r.read<std::uint16_t>("fmt.bits_per_sample");
      if (format == kFormatExtensible) {
        if (size < 40) {
          throw Error(ErrorCode::kIo, "wav: WAVE_FORMAT_EXTENSIBLE fmt too short");
        }
        r.read<std::uint16_t>("fmt.cb_size");
        r.read<std::uint16_t>("fmt.valid_bits");
        r.read<std::uint32_t>("fmt.channel_mask");
        // The sub-format GUID starts with the plain format tag.
        format = r.read<std::uint16_t>("fmt.sub_format");
      }
      r.skip(size - (r.pos() - start));
      have_fmt = true;
    } else if (tag_is(id, "data")) {
      data = r.take(size);
      have_data = true;
    } else {
      r.skip(size);
    }
    if (size % 2 == 1) r.skip(1);
  }

  if (!have_fmt) throw Error(ErrorCode::kIo, "wav: no fmt chunk");
  if (!have_data) throw Error(ErrorCode::kIo, "wav: no data chunk");
  if (channels == 0) {
    throw Error(ErrorCode::kUnsupportedFormat, "wav: fmt.num_channels is 0");
  }
  if (rate == 0) {
    throw Error(ErrorCode::kUnsupportedFormat, "wav: fmt.sample_rate is 0");
  }

  int bytes_per_sample = 0;
  if (format == kFormatPcm) {
    if (bits != 16) {
      throw Error(ErrorCode::kUnsupportedFormat,
                  "wav: unsupported fmt.bits_per_sample=" +
                      std::to_string(bits) + " for PCM (only 16)");
    }
    bytes_per_sample = 2;
  } else if (format == kFormatFloat) {
    if (bits != 32) {
      throw Error(ErrorCode::kUnsupportedFormat,
                  "wav: unsupported fmt.bits_per_sample=" +
                      std::to_string(bits) + " for IEEE float (only 32)");
    }
    bytes_per_sample = 4;
  } else {
    throw Error(ErrorCode::kUnsupportedFormat,
                "wav: unsupported fmt.audio_format=" + std::to_string(format) +
                    " (only PCM=1 and IEEE float=3)");
  }

  if (info != nullptr) {
    info->format = format == kFormatPcm ? SampleFormat::kPcm16 : SampleFormat::kFloat32;
    info->channels = channels;
  }

  const std::size_t frame_bytes =
      static_cast<std::size_t>(bytes_per_sample) * channels;
  const std::size_t frames = data.size() / frame_bytes;

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.samples.resize(frames);
  ByteReader d(data);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      if (format == kFormatPcm) {
        acc += d.read<std::int16_t>("sample") / 32768.0;
      } else {
        acc += d.read<float>("sample");
      }
    }
    clip.samples[i] =
        channels == 1 ? static_cast<float>(acc)
                      : static_cast<float>(acc / static_cast<double>(channels));
  }
  return clip;
}

std::vector<std::byte> encode_wav(const AudioClip& clip, SampleFormat format) {
  const bool pcm = format == SampleFormat::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t block = bits / 8;
  const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * block);

  std::vector<std::byte> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put<std::uint32_t>(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put<std::uint32_t>(out, 16);
  put<std::uint16_t>(out, pcm ? kFormatPcm : kFormatFloat);
  put<std::uint16_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(clip.sample_rate));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(clip.sample_rate) * block);
  put<std::uint16_t>(out, static_cast<std::uint16_t>(block));
  put<std::uint16_t>(out, bits);
  put_tag(out, "data");
  put<std::uint32_t>(out, data_bytes);
  for (float s : clip.samples) {
    if (pcm) {
      double v = std::round(static_cast<double>(s) * 32768.0);
      v = std::clamp(v, -32768.0, 32767.0);
      put<std::int16_t>(out, static_cast<std::int16_t>(v));
    } else {
      put<float>(out, s);
    }
  }
  return out;
}

AudioClip load_wav(const std::filesystem::path& path, WavInfo* info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path.string());
  return decode_wav(std::as_bytes(std::span(raw)), info);
}

void save_wav(const AudioClip& clip, const std::filesystem::path& path,
              SampleFormat format) {
  auto bytes = encode_wav(clip, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

AudioClip crop(const AudioClip& clip, double seconds) {
  if (!(seconds > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "crop: seconds must be > 0");
  }
  // The epsilon absorbs representation error such as 0.001 * 8000.
  const double exact = seconds * clip.sample_rate;
  const auto keep = static_cast<std::size_t>(std::floor(exact + 1e-9 * exact));
  AudioClip out = clip;
  if (keep < out.samples.size()) out.samples.resize(keep);
  return out;
}

AudioClip resample_linear(const AudioClip& clip, int new_rate) {
  if (new_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "resample: rate must be > 0");
  }
  if (new_rate == clip.sample_rate || clip.samples.empty()) {
    AudioClip out = clip;
    out.sample_rate = new_rate;
    return out;
  }
  const std::size_t n = clip.samples.size();
  const double ratio = static_cast<double>(clip.sample_rate) / new_rate;
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * new_rate / clip.sample_rate));

  AudioClip out;
  out.sample_rate = new_rate;
  out.gain = clip.gain;
  out.samples.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double x = static_cast<double>(i) * ratio;
    const auto i0 = static_cast<std::size_t>(std::floor(x));
    if (i0 + 1 >= n) {
      out.samples[i] = clip.samples[n - 1];
      continue;
    }
    const double frac = x - static_cast<double>(i0);
    out.samples[i] = static_cast<float>(
        (1.0 - frac) * clip.samples[i0] + frac * clip.samples[i0 + 1]);
  }
  return out;
}

AudioClip normalize_peak(const AudioClip& clip, double peak) {
  if (!(peak > 0.0 && peak <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "normalize_peak: peak must be in (0, 1]");
  }
  double old_peak = 0.0;
  for (float s : clip.samples) old_peak = std::max(old_peak, std::fabs(double{s}));
  if (old_peak == 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "normalize_peak: clip is all zero, scale is undefined");
  }
  AudioClip out = clip;
  if (old_peak == peak) return out;
  const double factor = peak / old_peak;
  for (float& s : out.samples) s = static_cast<float>(s * factor);
  out.gain = clip.gain * (old_peak / peak);
  return out;
}

}  // namespace ssir
