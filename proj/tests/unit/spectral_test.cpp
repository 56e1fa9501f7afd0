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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ssir/error.hpp"
#include "test_util.hpp"

namespace ssir {
namespace {

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double rel_l2(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d / energy(a));
}

double snr_db(std::span<const double> clean, std::span<const double> test) {
  double err = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) err += std::pow(clean[i] - test[i], 2);
  return 10.0 * std::log10(energy(clean) / err);
}

// Window and frame built here from the definition, not from the library.
std::vector<double> windowed_frame(std::span<const double> x, int n_fft, std::size_t center) {
  std::vector<double> frame(static_cast<std::size_t>(n_fft));
  for (int k = 0; k < n_fft; ++k) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * k / n_fft);
    frame[static_cast<std::size_t>(k)] = w * x[center - n_fft / 2 + static_cast<std::size_t>(k)];
  }
  return frame;
}

TEST(Stft, ConfigValidation) {
  EXPECT_NO_THROW(validate(StftConfig{}));
  EXPECT_THROW(validate(StftConfig{2048, 700}), Error);
  EXPECT_THROW(validate(StftConfig{2047, 512}), Error);
  EXPECT_THROW(validate(StftConfig{2048, 2048}), Error);
  EXPECT_THROW(validate(StftConfig{2048, 0}), Error);
  EXPECT_THROW(stft(std::vector<double>{}, StftConfig{}), Error);
  Spectrogram bad;
  bad.config = StftConfig{2048, 700};
  EXPECT_THROW(istft(bad, 10), Error);
}

TEST(Stft, FrameCountAndShape) {
  for (std::size_t len : {1u, 511u, 512u, 513u, 8000u}) {
    const auto s = stft(testing::uniform_values(len, 1), StftConfig{});
    EXPECT_EQ(s.bins(), 1025);
    EXPECT_EQ(s.frames(), static_cast<Eigen::Index>((len + 511) / 512));
  }
}

TEST(Stft, ZeroInZeroOut) {
  const auto s = stft(std::vector<double>(3000, 0.0), StftConfig{});
  EXPECT_TRUE(s.coeffs.isZero(0.0));
  EXPECT_EQ(istft(s, 3000), std::vector<double>(3000, 0.0));
}

TEST(Stft, MatchesNaiveDftOnRandomInput) {
  const StftConfig cfg{64, 16};
  const auto x = testing::uniform_values(400, 17);
  const auto s = stft(x, cfg);
  for (Eigen::Index j = 2; j < s.frames() - 2; ++j) {
    const auto ref = ssir_oracle::dft(windowed_frame(x, cfg.n_fft, static_cast<std::size_t>(j) * 16));
    for (int b = 0; b < cfg.bins(); ++b) {
      EXPECT_NEAR(std::abs(s.coeffs(b, j) - ref[static_cast<std::size_t>(b)]), 0.0, 1e-9);
    }
  }
}

TEST(Stft, BinCenteredSineStaysInMainLobe) {
  const int n_fft = 2048;
  const std::size_t k0 = 100;
  std::vector<double> x(8192);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(k0 * i) / n_fft);
  }
  const auto s = stft(x, StftConfig{});
  for (Eigen::Index j = 2; j < s.frames() - 2; ++j) {
    const double total = s.coeffs.col(j).squaredNorm();
    const double peak = std::norm(s.coeffs(k0, j));
    const double lobe = peak + std::norm(s.coeffs(k0 - 1, j)) + std::norm(s.coeffs(k0 + 1, j));
    EXPECT_GE(lobe / total, 0.99);
    // Hann puts 1/2 of the amplitude in the centre bin and 1/4 either side.
    EXPECT_NEAR(peak / total, 2.0 / 3.0, 1e-9);
  }
}

TEST(Stft, ParsevalPerFrame) {
  const auto x = testing::white_noise(12000, 0.3, 5);
  const auto s = stft(x, StftConfig{});
  for (Eigen::Index j = 2; j < s.frames() - 4; ++j) {
    const auto frame = windowed_frame(x, 2048, static_cast<std::size_t>(j) * 512);
    const double time_energy = energy(frame);
    double spec = 0.0;
    for (Eigen::Index b = 0; b < s.bins(); ++b) {
      const double weight = (b == 0 || b == s.bins() - 1) ? 1.0 : 2.0;
      spec += weight * std::norm(s.coeffs(b, j));
    }
    EXPECT_NEAR(spec / 2048.0 / time_energy, 1.0, 1e-6);
  }
}

TEST(Istft, RoundTripProperty) {
  std::mt19937_64 rng(8);
  for (const StftConfig cfg : {StftConfig{}, StftConfig{256, 64}, StftConfig{64, 32}}) {
    for (std::size_t len : {1u, 2u, 37u, 300u, 2048u, 4097u, 22050u}) {
      const auto x = testing::white_noise(len, 0.5, rng());
      const auto y = istft(stft(x, cfg), len);
      ASSERT_EQ(y.size(), len);
      EXPECT_LT(rel_l2(x, y), 1e-6) << "n_fft " << cfg.n_fft << " len " << len;
    }
  }
}

TEST(NoiseEstimate, Identities) {
  const auto a = testing::uniform_values(1000, 1);
  const auto b = testing::uniform_values(1000, 2);
  const auto eps = noise_estimate(a, b, 2.0);
  const auto swapped = noise_estimate(b, a, 2.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(eps[i], a[i] - b[i]);
    EXPECT_EQ(swapped[i], -eps[i]);
  }
  for (double v : noise_estimate(a, a, 2.0)) EXPECT_EQ(v, 0.0);
  for (double v : noise_estimate(a, b, 0.0)) EXPECT_EQ(std::fabs(v), 0.0);
  const auto scaled = noise_estimate(a, b, 3.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(scaled[i], 3.0 * (a[i] - (a[i] + b[i]) / 2.0), 1e-15);
  }
  EXPECT_THROW(noise_estimate(a, std::span(b).first(999), 2.0), Error);
}

TEST(SpectralGate, ZeroEstimatePassesThrough) {
  const int rate = 16000;
  auto x = testing::tone(rate, rate, 440.0, 0.5);
  const auto n = testing::white_noise(x.size(), 0.05, 3);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += n[i];
  const std::vector<double> zero(x.size(), 0.0);
  const auto y = spectral_gate(x, std::span<const double>(zero));
  ASSERT_EQ(y.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], x[i], 1e-6);
}

TEST(SpectralGate, OracleNoiseImprovesSnr) {
  const int rate = 22050;
  const auto clean = testing::tone(rate, rate, 440.0, 0.5);
  const auto noise = testing::white_noise(clean.size(), 0.05, 12);
  std::vector<double> noisy(clean.size());
  for (std::size_t i = 0; i < noisy.size(); ++i) noisy[i] = clean[i] + noise[i];
  const auto out = spectral_gate(noisy, std::span<const double>(noise));
  const double before = snr_db(clean, noisy);
  const double after = snr_db(clean, out);
  EXPECT_GE(after - before, 5.0) << "before " << before << " after " << after;
}

TEST(SpectralGate, NoiseAgainstItselfIsRemoved) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto n = testing::white_noise(16000, 0.1, seed);
    const auto y = spectral_gate(n, std::span<const double>(n));
    EXPECT_LE(energy(y), 0.1 * energy(n)) << "seed " << seed;
  }
}

TEST(SpectralGate, LengthPreserved) {
  for (std::size_t len : {1u, 100u, 2047u, 5000u}) {
    const auto x = testing::white_noise(len, 0.2, len);
    EXPECT_EQ(spectral_gate(x, std::nullopt).size(), len);
    const auto shorter = testing::white_noise(len / 2 + 1, 0.2, len + 1);
    EXPECT_EQ(spectral_gate(x, std::span<const double>(shorter)).size(), len);
  }
  EXPECT_THROW(spectral_gate(std::vector<double>{}, std::nullopt), Error);
}

// Gating twice with the same estimate: energy of the change relative to the
// once-gated signal. The 2-bin frequency box shifts the mask by half a bin,
// so a second pass erodes the lower lobe edge slightly; the worst case over
// this sweep measured 0.0119 during development.
TEST(SpectralGate, NearlyIdempotentProperty) {
  double worst = 0.0;
  for (int rate : {8000, 16000, 22050}) {
    for (int seed = 0; seed < 8; ++seed) {
      for (double sigma : {0.02, 0.05, 0.16}) {
        const auto noise = testing::white_noise(static_cast<std::size_t>(rate), sigma,
                                                static_cast<std::uint64_t>(seed));
        auto x = testing::tone(noise.size(), rate, 220.0 + 110.0 * seed, 0.5);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += noise[i];
        const auto g1 = spectral_gate(x, std::span<const double>(noise));
        const auto g2 = spectral_gate(g1, std::span<const double>(noise));
        double d = 0.0;
        for (std::size_t i = 0; i < g1.size(); ++i) d += (g2[i] - g1[i]) * (g2[i] - g1[i]);
        worst = std::max(worst, d / energy(g1));
      }
    }
  }
  EXPECT_LT(worst, 0.02);
}

TEST(Mel, ScaleRoundTrip) {
  EXPECT_NEAR(hz_to_mel(700.0), 2595.0 * std::log10(2.0), 1e-12);
  EXPECT_EQ(hz_to_mel(0.0), 0.0);
  for (double hz : {0.0, 55.0, 440.0, 4000.0, 11025.0}) {
    EXPECT_NEAR(mel_to_hz(hz_to_mel(hz)), hz, 1e-9 * (1.0 + hz));
  }
}

TEST(Mel, FilterbankRowsAreTriangles) {
  const int sr = 22050;
  const auto fb = mel_filterbank(128, 2048, sr);
  ASSERT_EQ(fb.rows(), 128);
  ASSERT_EQ(fb.cols(), 1025);
  for (Eigen::Index m = 0; m < fb.rows(); ++m) {
    const auto row = fb.row(m);
    EXPECT_GE(row.minCoeff(), 0.0);
    Eigen::Index peak = 0;
    row.maxCoeff(&peak);
    // Rises to the peak, then falls: one run of non-zeros, no second hump.
    for (Eigen::Index k = 1; k <= peak; ++k) EXPECT_GE(row(k), row(k - 1));
    for (Eigen::Index k = peak + 1; k < row.size(); ++k) EXPECT_LE(row(k), row(k - 1));
    const double lo = mel_to_hz(hz_to_mel(sr / 2.0) * m / 129.0);
    const double hi = mel_to_hz(hz_to_mel(sr / 2.0) * (m + 2) / 129.0);
    for (Eigen::Index k = 0; k < row.size(); ++k) {
      const double f = static_cast<double>(k) * sr / 2048.0;
      if (f <= lo || f >= hi) EXPECT_EQ(row(k), 0.0);
    }
    // Area normalisation: wide triangles integrate to about one over Hz.
    if (hi - lo > 200.0) EXPECT_NEAR(row.sum() * sr / 2048.0, 1.0, 0.05) << m;
  }
  EXPECT_THROW(mel_filterbank(0, 2048, sr), Error);
}

TEST(LogMel, ZeroSignalIsFloor) {
  const auto m = log_mel(std::vector<double>(5000, 0.0), 16000);
  EXPECT_EQ(m.rows(), 128);
  EXPECT_EQ(m.cols(), 10);
  EXPECT_TRUE((m.array() == -10.0).all());
  EXPECT_THROW(log_mel(std::vector<double>(10, 0.0), 0), Error);
}

TEST(LogMel, SweepRisesThroughBands) {
  const int sr = 16000;
  const std::size_t n = 4 * sr;
  std::vector<double> x(n);
  // Exponential sweep from 100 Hz to 6 kHz.
  const double f0 = 100.0;
  const double f1 = 6000.0;
  const double T = static_cast<double>(n) / sr;
  const double k = std::log(f1 / f0) / T;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr;
    x[i] = 0.5 * std::sin(2.0 * std::numbers::pi * f0 * (std::exp(k * t) - 1.0) / k);
  }
  const auto m = log_mel(x, sr, 64);
  Eigen::Index prev = -1;
  for (Eigen::Index j = 2; j < m.cols() - 2; ++j) {
    Eigen::Index arg = 0;
    m.col(j).maxCoeff(&arg);
    EXPECT_GE(arg, prev) << "frame " << j;
    prev = arg;
  }
  EXPECT_GT(prev, 48);
}

TEST(RenderPgm, HeaderScalingAndOrientation) {
  Eigen::MatrixXd m(2, 3);
  // Row 0 is the lowest band. Values are log10 power, so -4 is -40 dB.
  m << -8.0, -4.0, 0.0,
       -10.0, 1.0, -2.0;
  const auto bytes = render_pgm(m);
  const std::string header = "P5\n3 2\n255\n";
  ASSERT_EQ(bytes.size(), header.size() + 6);
  EXPECT_EQ(std::string(reinterpret_cast<const char*>(bytes.data()), header.size()), header);
  std::vector<int> px;
  for (std::size_t i = header.size(); i < bytes.size(); ++i) px.push_back(static_cast<int>(bytes[i]));
  EXPECT_EQ(px, (std::vector<int>{0, 255, 191, 0, 128, 255}));
}

}  // namespace
}  // namespace ssir
