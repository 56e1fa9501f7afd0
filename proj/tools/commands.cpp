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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <regex>

#include <json.hpp>

#include "ssir/encoding.hpp"
#include "ssir/error.hpp"
#include "ssir/quantizer.hpp"
#include "ssir/spectral.hpp"

namespace ssir::cli {
namespace {

std::vector<double> to_double(const std::vector<float>& v) {
  return {v.begin(), v.end()};
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::byte>& bytes) {
  ssir::write_file(path, bytes);
}

}  // namespace

std::vector<int> parse_layers(const std::string& spec) {
  if (spec.empty() || spec == "0") return {};
  static const std::regex pattern(R"(^([0-9]+)x([0-9]+)$)");
  std::smatch m;
  if (!std::regex_match(spec, m, pattern)) {
    throw Error(ErrorCode::kInvalidArgument,
                "layer spec '" + spec + "' is not of the form NxW (e.g. 2x256) or 0");
  }
  const long count = std::stol(m[1].str());
  const long width = std::stol(m[2].str());
  if (count > 64 || width <= 0 || width > 0xFFFF) {
    throw Error(ErrorCode::kInvalidArgument, "layer spec '" + spec + "' is out of range");
  }
  return std::vector<int>(static_cast<std::size_t>(count), static_cast<int>(width));
}

CompressSummary compress(const CompressOptions& opts, std::ostream& log) {
  WavInfo info;
  AudioClip clip = load_wav(opts.input, &info);
  if (opts.sample_rate > 0 && clip.sample_rate != opts.sample_rate) {
    log << "resampling " << clip.sample_rate << " Hz -> " << opts.sample_rate << " Hz\n";
    clip = resample_linear(clip, opts.sample_rate);
  }
  clip = crop(clip, opts.crop_seconds);
  if (clip.samples.empty()) throw Error(ErrorCode::kInvalidArgument, "input has no samples");
  if (opts.normalize) clip = normalize_peak(clip, opts.peak);

  log << "training on " << clip.size() << " samples @ " << clip.sample_rate << " Hz, "
      << param_count(opts.net) << " parameters\n";
  auto progress = [&](int it, double loss) {
    if (opts.log_every > 0 && it % opts.log_every == 0) {
      log << "iter " << it << " loss " << loss << "\n";
    }
  };
  TrainResult result = train(clip, opts.net, opts.train, progress);
  log << "trained in " << result.report.seconds << " s; final mse head0 "
      << result.report.final_loss_head0 << " head1 " << result.report.final_loss_head1 << "\n";

  ContainerFile file;
  auto& h = file.header;
  h.flags = opts.normalize ? kFlagPeakNormalized : 0;
  h.sample_rate = static_cast<std::uint32_t>(clip.sample_rate);
  h.num_samples = clip.size();
  h.gain = static_cast<float>(clip.gain);
  h.net_cfg = opts.net;
  h.decode = opts.decode;
  if (opts.quantize) {
    file.model = quantize(result.params);
  } else {
    file.model = std::move(result.params);
  }
  const auto bytes = encode_file(file);
  write_bytes(opts.output, bytes);

  CompressSummary summary;
  summary.report = std::move(result.report);
  summary.file_bytes = bytes.size();
  summary.source_bytes = clip.size() * static_cast<std::uint64_t>(info.bytes_per_sample());
  summary.compression_ratio = compression_ratio(summary.source_bytes, bytes.size());
  log << "wrote " << opts.output.string() << " (" << bytes.size() << " bytes, "
      << (opts.quantize ? "int8" : "float32") << "); compression ratio "
      << summary.compression_ratio << "\n";
  return summary;
}

AudioClip decode_model(const ContainerFile& file, const DecodeOptions& opts) {
  const auto& h = file.header;
  const int rate = opts.sample_rate.value_or(static_cast<int>(h.sample_rate));
  if (rate <= 0) throw Error(ErrorCode::kInvalidArgument, "sample rate must be > 0");
  if (h.sample_rate == 0) throw Error(ErrorCode::kUnsupportedFormat, "header sample rate is 0");
  const bool twin = h.net_cfg.twin_heads();
  if (opts.head == HeadSelect::kHead1 && !twin) {
    throw Error(ErrorCode::kInvalidArgument, "model has a single head; --head 1 unavailable");
  }

  const auto n = static_cast<std::size_t>(std::llround(
      static_cast<double>(h.num_samples) * rate / static_cast<double>(h.sample_rate)));
  AudioClip out;
  out.sample_rate = rate;
  if (n == 0) return out;

  const SiameseParams<float> params = materialize(file);
  const auto heads = evaluate(params, h.net_cfg, time_grid(n));

  const bool gate = opts.denoise && twin;
  if (!gate) {
    // Stays in float so the output matches forward() bit for bit.
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      float v = heads.head0(k);
      if (opts.head == HeadSelect::kHead1) v = heads.head1(k);
      if (opts.head == HeadSelect::kMean && twin) v = (heads.head0(k) + heads.head1(k)) / 2.0f;
      out.samples[i] = v * h.gain;
    }
    return out;
  }

  std::vector<double> h0(n);
  std::vector<double> h1(n);
  for (std::size_t i = 0; i < n; ++i) {
    h0[i] = heads.head0(static_cast<Eigen::Index>(i));
    h1[i] = heads.head1(static_cast<Eigen::Index>(i));
  }
  std::vector<double> signal = h0;
  if (opts.head == HeadSelect::kHead1) signal = h1;
  if (opts.head == HeadSelect::kMean) {
    for (std::size_t i = 0; i < n; ++i) signal[i] = (h0[i] + h1[i]) / 2.0;
  }
  const auto eps = noise_estimate(h0, h1, opts.alpha.value_or(h.decode.alpha));
  StftConfig stft_cfg;
  stft_cfg.n_fft = static_cast<int>(h.decode.n_fft);
  stft_cfg.hop = static_cast<int>(h.decode.hop);
  GateConfig gate_cfg;
  gate_cfg.n_std_thresh = h.decode.n_std_thresh;
  const auto cleaned = spectral_gate(signal, std::span<const double>(eps), stft_cfg, gate_cfg);
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = static_cast<float>(cleaned[i] * h.gain);
  }
  return out;
}

void decompress(const DecompressOptions& opts, std::ostream& log) {
  const auto file = decode_file(read_file(opts.input));
  const auto clip = decode_model(file, opts.decode);
  save_wav(clip, opts.output, opts.format);
  log << "wrote " << opts.output.string() << " (" << clip.size() << " samples @ "
      << clip.sample_rate << " Hz"
      << (opts.decode.denoise && file.header.net_cfg.twin_heads() ? ", denoised" : "")
      << ")\n";
}

std::string format_json(const EvalResult& r) {
  auto number = [](double v) -> nlohmann::ordered_json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  nlohmann::ordered_json j{{"mse", number(r.mse)}, {"snr_db", number(r.snr_db)}, {"lsd", number(r.lsd)}};
  if (r.compression_ratio) j["compression_ratio"] = number(*r.compression_ratio);
  return j.dump();
}

EvalResult eval(const std::filesystem::path& ref, const std::filesystem::path& test,
                const std::optional<std::filesystem::path>& ssir_file) {
  WavInfo info;
  AudioClip a = load_wav(ref, &info);
  AudioClip b = load_wav(test);
  const int rate = std::min(a.sample_rate, b.sample_rate);
  a = resample_linear(a, rate);
  b = resample_linear(b, rate);
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "eval: empty input");
  a.samples.resize(n);
  b.samples.resize(n);
  EvalResult r = evaluate_pair(to_double(a.samples), to_double(b.samples));
  if (ssir_file) {
    const auto size = std::filesystem::file_size(*ssir_file);
    r.compression_ratio = compression_ratio(n * static_cast<std::uint64_t>(info.bytes_per_sample()), size);
  }
  return r;
}

void spectrogram(const std::filesystem::path& input,
                 const std::filesystem::path& output, int n_mels) {
  const AudioClip clip = load_wav(input);
  if (clip.samples.empty()) throw Error(ErrorCode::kInvalidArgument, "spectrogram: empty input");
  const auto m = log_mel(to_double(clip.samples), clip.sample_rate, n_mels);
  write_bytes(output, render_pgm(m));
}

EvalResult noise_demo(const NoiseDemoOptions& opts, std::ostream& log) {
  const AudioClip clean = load_wav(opts.input);
  const AudioClip noisy = add_noise(clean, opts.variance, opts.seed);
  save_wav(noisy, opts.output, SampleFormat::kFloat32);
  const auto a = to_double(clean.samples);
  const auto b = to_double(noisy.samples);
  EvalResult r;
  r.mse = mse(a, b);
  r.snr_db = snr(a, b);
  r.lsd = lsd(a, b);
  if (opts.pgm_prefix) {
    write_bytes(*opts.pgm_prefix + "_clean.pgm",
                render_pgm(log_mel(a, clean.sample_rate, opts.n_mels)));
    write_bytes(*opts.pgm_prefix + "_noisy.pgm",
                render_pgm(log_mel(b, noisy.sample_rate, opts.n_mels)));
  }
  log << "waveform mse " << r.mse << ", log-spectral distance " << r.lsd << " dB\n";
  return r;
}

}  // namespace ssir::cli
