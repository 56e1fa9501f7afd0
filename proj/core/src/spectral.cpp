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

#include "ssir/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "ssir/error.hpp"

namespace ssir {
namespace {

// The FFTW planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

class FftBuffers {
 public:
  explicit FftBuffers(int n)
      : n_(n),
        real_(fftw_alloc_real(static_cast<std::size_t>(n))),
        cplx_(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1))) {
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(n, real_, cplx_, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(n, cplx_, real_, FFTW_ESTIMATE);
  }
  ~FftBuffers() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(forward_);
      fftw_destroy_plan(inverse_);
    }
    fftw_free(real_);
    fftw_free(cplx_);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;

  double* real() { return real_; }
  std::complex<double>* cplx() { return reinterpret_cast<std::complex<double>*>(cplx_); }
  void forward() { fftw_execute(forward_); }
  void inverse() { fftw_execute(inverse_); }
  int size() const { return n_; }

 private:
  int n_;
  double* real_;
  fftw_complex* cplx_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

// Reflection without edge repeat, extended periodically for short inputs.
std::size_t reflect(std::ptrdiff_t i, std::size_t len) {
  if (len == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (len - 1));
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(len)) i = period - i;
  return static_cast<std::size_t>(i);
}

double to_db(double magnitude) {
  return 20.0 * std::log10(std::max(magnitude, kMagnitudeFloor));
}

Eigen::MatrixXd db_matrix(const Spectrogram& s) {
  Eigen::MatrixXd out(s.bins(), s.frames());
  for (Eigen::Index f = 0; f < s.frames(); ++f) {
    for (Eigen::Index k = 0; k < s.bins(); ++k) out(k, f) = to_db(std::abs(s.coeffs(k, f)));
  }
  return out;
}

// Normalized box filter of `size` taps along each column, dividing by the
// in-range tap count at the edges.
Eigen::MatrixXd box_rows(const Eigen::MatrixXd& m, int size) {
  if (size <= 1) return m;
  const Eigen::Index before = size / 2;
  const Eigen::Index after = size - 1 - before;
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const Eigen::Index lo = std::max<Eigen::Index>(0, r - before);
      const Eigen::Index hi = std::min<Eigen::Index>(m.rows() - 1, r + after);
      out(r, c) = m.col(c).segment(lo, hi - lo + 1).mean();
    }
  }
  return out;
}

}  // namespace

void validate(const StftConfig& cfg) {
  if (cfg.n_fft < 2 || cfg.n_fft % 2 != 0 || cfg.hop <= 0 ||
      cfg.hop > cfg.n_fft / 2 || cfg.n_fft % cfg.hop != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "stft: n_fft=" + std::to_string(cfg.n_fft) +
                    " hop=" + std::to_string(cfg.hop) +
                    " does not satisfy constant overlap-add for a Hann window");
  }
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    w[static_cast<std::size_t>(k)] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * k / n);
  }
  return w;
}

Spectrogram stft(std::span<const double> samples, const StftConfig& cfg,
                 int sample_rate) {
  validate(cfg);
  if (samples.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "stft: empty input");
  }
  const std::size_t len = samples.size();
  const std::size_t frames = (len + static_cast<std::size_t>(cfg.hop) - 1) /
                             static_cast<std::size_t>(cfg.hop);
  const auto window = hann_window(cfg.n_fft);
  const std::ptrdiff_t half = cfg.n_fft / 2;

  Spectrogram spec;
  spec.config = cfg;
  spec.sample_rate = sample_rate;
  spec.coeffs.resize(cfg.bins(), static_cast<Eigen::Index>(frames));

  FftBuffers fft(cfg.n_fft);
  for (std::size_t j = 0; j < frames; ++j) {
    const auto center = static_cast<std::ptrdiff_t>(j) * cfg.hop;
    for (int k = 0; k < cfg.n_fft; ++k) {
      fft.real()[k] = window[static_cast<std::size_t>(k)] *
                      samples[reflect(center - half + k, len)];
    }
    fft.forward();
    for (int b = 0; b < cfg.bins(); ++b) {
      spec.coeffs(b, static_cast<Eigen::Index>(j)) = fft.cplx()[b];
    }
  }
  return spec;
}

std::vector<double> istft(const Spectrogram& spec, std::size_t out_len) {
  const auto& cfg = spec.config;
  validate(cfg);
  if (spec.bins() != cfg.bins()) {
    throw Error(ErrorCode::kShapeMismatch, "istft: bin count does not match n_fft");
  }
  const auto window = hann_window(cfg.n_fft);
  const std::ptrdiff_t half = cfg.n_fft / 2;
  std::vector<double> acc(out_len, 0.0);
  std::vector<double> norm(out_len, 0.0);

  FftBuffers fft(cfg.n_fft);
  const double inv_n = 1.0 / cfg.n_fft;
  for (Eigen::Index j = 0; j < spec.frames(); ++j) {
    for (int b = 0; b < cfg.bins(); ++b) fft.cplx()[b] = spec.coeffs(b, j);
    fft.inverse();
    const auto start = static_cast<std::ptrdiff_t>(j) * cfg.hop - half;
    for (int k = 0; k < cfg.n_fft; ++k) {
      const std::ptrdiff_t i = start + k;
      if (i < 0 || i >= static_cast<std::ptrdiff_t>(out_len)) continue;
      const double w = window[static_cast<std::size_t>(k)];
      acc[static_cast<std::size_t>(i)] += w * fft.real()[k] * inv_n;
      norm[static_cast<std::size_t>(i)] += w * w;
    }
  }
  for (std::size_t i = 0; i < out_len; ++i) {
    acc[i] = norm[i] > 1e-10 ? acc[i] / norm[i] : 0.0;
  }
  return acc;
}

std::vector<double> noise_estimate(std::span<const double> head0,
                                   std::span<const double> head1, double alpha) {
  if (head0.size() != head1.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "noise_estimate: head lengths differ (" +
                    std::to_string(head0.size()) + " vs " +
                    std::to_string(head1.size()) + ")");
  }
  // alpha * (h0 - (h0 + h1) / 2), folded so alpha = 2 gives h0 - h1 exactly.
  const double half = alpha / 2.0;
  std::vector<double> eps(head0.size());
  for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = half * (head0[i] - head1[i]);
  return eps;
}

std::vector<double> spectral_gate(std::span<const double> signal,
                                  std::optional<std::span<const double>> noise,
                                  const StftConfig& stft_cfg,
                                  const GateConfig& gate_cfg) {
  if (signal.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "spectral_gate: empty signal");
  }
  Spectrogram sig = stft(signal, stft_cfg);
  const Eigen::MatrixXd sig_db = db_matrix(sig);
  const Eigen::MatrixXd noise_db =
      noise.has_value() && !noise->empty() ? db_matrix(stft(*noise, stft_cfg)) : sig_db;

  const Eigen::Index bins = sig.bins();
  Eigen::MatrixXd mask(bins, sig.frames());
  for (Eigen::Index k = 0; k < bins; ++k) {
    const Eigen::RowVectorXd row = noise_db.row(k);
    if (row.maxCoeff() <= kDbFloor) {
      mask.row(k).setOnes();
      continue;
    }
    const double mean = row.mean();
    const double var = (row.array() - mean).square().mean();
    const double thresh = mean + gate_cfg.n_std_thresh * std::sqrt(var);
    for (Eigen::Index f = 0; f < sig.frames(); ++f) {
      mask(k, f) = sig_db(k, f) > thresh ? 1.0 : 0.0;
    }
  }

  mask = box_rows(mask, gate_cfg.smooth_freq_bins);
  mask = box_rows(mask.transpose(), gate_cfg.smooth_time_frames).transpose();

  sig.coeffs.array() *= mask.array().cast<std::complex<double>>();
  return istft(sig, signal.size());
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Eigen::MatrixXd mel_filterbank(int n_mels, int n_fft, int sample_rate) {
  if (n_mels <= 0 || n_fft <= 0 || sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "mel_filterbank: n_mels, n_fft and sample_rate must be > 0");
  }
  const int bins = n_fft / 2 + 1;
  const double top = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(top * static_cast<double>(i) / (n_mels + 1));
  }
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(n_mels, bins);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[static_cast<std::size_t>(m)];
    const double mid = edges[static_cast<std::size_t>(m) + 1];
    const double hi = edges[static_cast<std::size_t>(m) + 2];
    const double area_norm = 2.0 / (hi - lo);
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      const double rise = (f - lo) / (mid - lo);
      const double fall = (hi - f) / (hi - mid);
      fb(m, k) = std::max(0.0, std::min(rise, fall)) * area_norm;
    }
  }
  return fb;
}

Eigen::MatrixXd log_mel(std::span<const double> samples, int sample_rate,
                        int n_mels, const StftConfig& cfg) {
  if (sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "log_mel: sample_rate must be > 0");
  }
  const Spectrogram spec = stft(samples, cfg, sample_rate);
  const Eigen::MatrixXd power = spec.coeffs.cwiseAbs2();
  const Eigen::MatrixXd mel = mel_filterbank(n_mels, cfg.n_fft, sample_rate) * power;
  return mel.array().max(1e-10).log10().matrix();
}

std::vector<std::byte> render_pgm(const Eigen::MatrixXd& m, double lo_db,
                                  double hi_db) {
  const std::string header = "P5\n" + std::to_string(m.cols()) + " " +
                             std::to_string(m.rows()) + "\n255\n";
  std::vector<std::byte> out;
  out.reserve(header.size() + static_cast<std::size_t>(m.size()));
  for (char c : header) out.push_back(static_cast<std::byte>(c));
  for (Eigen::Index r = m.rows(); r-- > 0;) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double db = 10.0 * m(r, c);
      const double v = std::clamp((db - lo_db) / (hi_db - lo_db), 0.0, 1.0) * 255.0;
      out.push_back(static_cast<std::byte>(static_cast<unsigned char>(std::lround(v))));
    }
  }
  return out;
}

}  // namespace ssir
