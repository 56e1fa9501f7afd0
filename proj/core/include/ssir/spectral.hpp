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

#ifndef SSIR_SPECTRAL_HPP_
#define SSIR_SPECTRAL_HPP_

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ssir {

// Magnitudes are floored here before conversion to dB (-120 dB).
inline constexpr double kMagnitudeFloor = 1e-6;
inline constexpr double kDbFloor = -120.0;

// Periodic Hann window, reflect-padded centered frames.
struct StftConfig {
  int n_fft = 2048;
  int hop = 512;

  int bins() const { return n_fft / 2 + 1; }
};

// Throws unless n_fft is even, hop divides n_fft and hop <= n_fft / 2, the
// conditions under which the Hann window overlap-adds to a constant.
void validate(const StftConfig& cfg);

struct Spectrogram {
  Eigen::MatrixXcd coeffs;  // bins x frames
  StftConfig config;
  int sample_rate = 0;

  Eigen::Index bins() const { return coeffs.rows(); }
  Eigen::Index frames() const { return coeffs.cols(); }
};

std::vector<double> hann_window(int n);

// Frame j is centered on sample j * hop; there are ceil(len / hop) frames.
Spectrogram stft(std::span<const double> samples, const StftConfig& cfg,
                 int sample_rate = 0);

// Weighted overlap-add normalized by the summed squared window.
std::vector<double> istft(const Spectrogram& spec, std::size_t out_len);

// alpha * (head0 - (head0 + head1) / 2).
std::vector<double> noise_estimate(std::span<const double> head0,
                                   std::span<const double> head1, double alpha);

struct GateConfig {
  double n_std_thresh = 1.5;
  // Extent of the normalized box that smooths the binary mask. Taps run
  // from -size/2 to size - 1 - size/2 around each cell.
  int smooth_freq_bins = 2;
  int smooth_time_frames = 4;
};

// Stationary spectral gating. Per frequency, threshold = mean + n_std * std of
// the noise dB spectrogram over time (the signal's own spectrogram when
// `noise` is absent). Cells of the signal above threshold keep gain 1, the
// rest 0; the mask is box-smoothed and applied at full strength. A frequency
// whose noise sits entirely on the dB floor passes untouched. Output length
// equals input length.
std::vector<double> spectral_gate(std::span<const double> signal,
                                  std::optional<std::span<const double>> noise,
                                  const StftConfig& stft_cfg = {},
                                  const GateConfig& gate_cfg = {});

double hz_to_mel(double hz);  // HTK
double mel_to_hz(double mel);

// n_mels x (n_fft / 2 + 1) triangular filters on the HTK mel scale spanning
// 0 .. sample_rate / 2, each scaled to unit area (2 / bandwidth).
Eigen::MatrixXd mel_filterbank(int n_mels, int n_fft, int sample_rate);

// log10 of mel-pooled power, floored at 1e-10. n_mels x frames.
Eigen::MatrixXd log_mel(std::span<const double> samples, int sample_rate,
                        int n_mels = 128, const StftConfig& cfg = {});

// Binary PGM (P5). Values are 10 * log_mel (dB) mapped affinely from
// [lo_db, hi_db] to [0, 255] and clamped. Highest mel band is the top row,
// time runs left to right.
std::vector<std::byte> render_pgm(const Eigen::MatrixXd& log_mel_matrix,
                                  double lo_db = -80.0, double hi_db = 0.0);

}  // namespace ssir

#endif  // SSIR_SPECTRAL_HPP_
