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

#include "ssir/codec.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "ssir/error.hpp"

namespace ssir {
namespace {

constexpr std::array<char, 4> kMagic{'S', 'S', 'I', 'R'};
// magic, version, flags, rate, samples, gain, L, sigma, omega0, omega, alpha,
// n_fft, hop, n_std_thresh, two width-list counts.
constexpr std::size_t kFixedHeader =
    4 + 2 + 2 + 4 + 8 + 4 + 2 + 4 + 4 + 4 + 4 + 4 + 4 + 4 + 2 + 2;

class Writer {
 public:
  template <typename T>
  void put(T v) {
    std::array<std::byte, sizeof(T)> raw;
    std::memcpy(raw.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(raw.begin(), raw.end());
    }
    out_.insert(out_.end(), raw.begin(), raw.end());
  }

  void widths(const std::vector<int>& w) {
    put<std::uint16_t>(static_cast<std::uint16_t>(w.size()));
    for (int x : w) put<std::uint16_t>(static_cast<std::uint16_t>(x));
  }

  std::vector<std::byte> take() { return std::move(out_); }

 private:
  std::vector<std::byte> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> b) : bytes_(b) {}

  template <typename T>
  T get(const char* what) {
    if (pos_ + sizeof(T) > bytes_.size()) {
      throw Error(ErrorCode::kTruncated,
                  std::string("ssir: truncated payload while reading ") + what);
    }
    std::array<std::byte, sizeof(T)> raw;
    std::memcpy(raw.data(), bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(raw.begin(), raw.end());
    }
    pos_ += sizeof(T);
    T v;
    std::memcpy(&v, raw.data(), sizeof(T));
    return v;
  }

  std::vector<int> widths(const char* what) {
    const auto n = get<std::uint16_t>(what);
    std::vector<int> w(n);
    for (auto& x : w) x = get<std::uint16_t>(what);
    return w;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

void check_widths(const std::vector<int>& w, const char* what) {
  for (int x : w) {
    if (x <= 0 || x > 0xFFFF) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("ssir: ") + what + " width out of u16 range");
    }
  }
}

}  // namespace

std::size_t header_size(const NetConfig& cfg) {
  return kFixedHeader + 2 * (cfg.shared.size() + cfg.siamese.size());
}

std::size_t file_size(const NetConfig& cfg, bool quantized) {
  std::size_t n = header_size(cfg);
  for (const auto& t : tensor_layout(cfg)) {
    n += 1 + 4 * t.shape.size() + (quantized ? 5 : 0);
    n += t.size() * (quantized ? 1 : 4);
  }
  return n;
}

std::vector<std::byte> encode_file(const ContainerFile& file) {
  const auto& h = file.header;
  validate(h.net_cfg);
  check_widths(h.net_cfg.shared, "shared");
  check_widths(h.net_cfg.siamese, "siamese");
  const bool quantized =
      std::holds_alternative<std::vector<QuantTensor>>(file.model);
  const auto layout = tensor_layout(h.net_cfg);

  Writer w;
  for (char c : kMagic) w.put<char>(c);
  w.put<std::uint16_t>(h.version);
  w.put<std::uint16_t>(static_cast<std::uint16_t>(
      (h.flags & ~kFlagQuantized) | (quantized ? kFlagQuantized : 0)));
  w.put<std::uint32_t>(h.sample_rate);
  w.put<std::uint64_t>(h.num_samples);
  w.put<float>(h.gain);
  w.put<std::uint16_t>(static_cast<std::uint16_t>(h.net_cfg.pe.num_frequencies));
  w.put<float>(static_cast<float>(h.net_cfg.pe.sigma));
  w.put<float>(static_cast<float>(h.net_cfg.omega0));
  w.put<float>(static_cast<float>(h.net_cfg.omega));
  w.put<float>(h.decode.alpha);
  w.put<std::uint32_t>(h.decode.n_fft);
  w.put<std::uint32_t>(h.decode.hop);
  w.put<float>(h.decode.n_std_thresh);
  w.widths(h.net_cfg.shared);
  w.widths(h.net_cfg.siamese);

  auto tensor_header = [&](const std::vector<std::uint32_t>& shape) {
    w.put<std::uint8_t>(static_cast<std::uint8_t>(shape.size()));
    for (auto d : shape) w.put<std::uint32_t>(d);
  };

  if (quantized) {
    const auto& tensors = std::get<std::vector<QuantTensor>>(file.model);
    if (tensors.size() != layout.size()) {
      throw Error(ErrorCode::kShapeMismatch, "ssir: tensor count does not match config");
    }
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      const auto& q = tensors[i];
      if (q.shape != layout[i].shape || q.data.size() != layout[i].size()) {
        throw Error(ErrorCode::kShapeMismatch,
                    "ssir: tensor " + layout[i].name + " shape mismatch");
      }
      tensor_header(q.shape);
      w.put<float>(q.scale);
      w.put<std::int8_t>(q.zero_point);
      for (auto v : q.data) w.put<std::int8_t>(v);
    }
  } else {
    const auto& params = std::get<SiameseParams<float>>(file.model);
    check_shapes(params, h.net_cfg);
    const auto spans = tensor_spans(params);
    for (std::size_t i = 0; i < spans.size(); ++i) {
      tensor_header(layout[i].shape);
      for (float v : spans[i]) w.put<float>(v);
    }
  }
  return w.take();
}

ContainerFile decode_file(std::span<const std::byte> bytes) {
  Reader r(bytes);
  if (bytes.size() < kMagic.size()) {
    throw Error(ErrorCode::kTruncated, "ssir: truncated payload (no magic)");
  }
  for (char c : kMagic) {
    if (r.get<char>("magic") != c) throw Error(ErrorCode::kBadMagic, "ssir: bad magic");
  }

  ContainerFile file;
  auto& h = file.header;
  h.version = r.get<std::uint16_t>("version");
  if (h.version != kFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "ssir: unsupported version " + std::to_string(h.version));
  }
  h.flags = r.get<std::uint16_t>("flags");
  h.sample_rate = r.get<std::uint32_t>("sample_rate");
  h.num_samples = r.get<std::uint64_t>("num_samples");
  h.gain = r.get<float>("gain");
  h.net_cfg.pe.num_frequencies = r.get<std::uint16_t>("pe_L");
  h.net_cfg.pe.sigma = r.get<float>("pe_sigma");
  h.net_cfg.omega0 = r.get<float>("omega0");
  h.net_cfg.omega = r.get<float>("omega");
  h.decode.alpha = r.get<float>("alpha");
  h.decode.n_fft = r.get<std::uint32_t>("n_fft");
  h.decode.hop = r.get<std::uint32_t>("hop");
  h.decode.n_std_thresh = r.get<float>("n_std_thresh");
  h.net_cfg.shared = r.widths("shared_widths");
  h.net_cfg.siamese = r.widths("siamese_widths");
  try {
    validate(h.net_cfg);
  } catch (const Error& e) {
    throw Error(ErrorCode::kShapeMismatch, std::string("ssir: invalid network config: ") + e.what());
  }

  const auto layout = tensor_layout(h.net_cfg);
  auto read_shape = [&](const TensorInfo& info) {
    const auto rank = r.get<std::uint8_t>("tensor rank");
    std::vector<std::uint32_t> shape(rank);
    for (auto& d : shape) d = r.get<std::uint32_t>("tensor dims");
    if (shape != info.shape) {
      throw Error(ErrorCode::kShapeMismatch,
                  "ssir: tensor " + info.name +
                      " shape does not chain with the header config");
    }
    return shape;
  };
  auto need = [&](std::size_t n, const TensorInfo& info) {
    if (r.remaining() < n) {
      throw Error(ErrorCode::kTruncated, "ssir: truncated payload in " + info.name);
    }
  };

  if (h.quantized()) {
    std::vector<QuantTensor> tensors;
    tensors.reserve(layout.size());
    for (const auto& info : layout) {
      QuantTensor t;
      t.shape = read_shape(info);
      t.scale = r.get<float>("scale");
      t.zero_point = r.get<std::int8_t>("zero_point");
      need(info.size(), info);
      t.data.resize(info.size());
      for (auto& v : t.data) v = r.get<std::int8_t>("payload");
      tensors.push_back(std::move(t));
    }
    file.model = std::move(tensors);
  } else {
    auto params = zero_params<float>(h.net_cfg);
    auto spans = tensor_spans(params);
    for (std::size_t i = 0; i < layout.size(); ++i) {
      read_shape(layout[i]);
      need(4 * layout[i].size(), layout[i]);
      for (auto& v : spans[i]) v = r.get<float>("payload");
    }
    file.model = std::move(params);
  }
  if (r.remaining() != 0) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "ssir: " + std::to_string(r.remaining()) + " trailing bytes after payload");
  }
  return file;
}

SiameseParams<float> materialize(const ContainerFile& file) {
  if (const auto* q = std::get_if<std::vector<QuantTensor>>(&file.model)) {
    return dequantize(*q, file.header.net_cfg);
  }
  return std::get<SiameseParams<float>>(file.model);
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

}  // namespace ssir
