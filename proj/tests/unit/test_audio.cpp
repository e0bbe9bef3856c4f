/*
 * Copyright 2026 The s2i Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>

#include "s2i/audio/frontend.hpp"
#include "s2i/audio/wav.hpp"
#include "s2i/core/error.hpp"

namespace s2i::audio {
namespace {

AudioClip clip_of(std::vector<float> s, int sr = kDefaultSampleRate) { return {std::move(s), sr}; }

AudioClip white_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-0.5f, 0.5f);
  AudioClip c{std::vector<float>(n), kDefaultSampleRate};
  for (auto& s : c.samples) s = u(rng);
  return c;
}

TEST(RemoveDc, SubtractsMean) {
  auto out = remove_dc(clip_of({1, 2, 3}));
  EXPECT_FLOAT_EQ(out.samples[0], -1);
  EXPECT_FLOAT_EQ(out.samples[1], 0);
  EXPECT_FLOAT_EQ(out.samples[2], 1);
}

TEST(RemoveDc, ZeroAndConstant) {
  for (float s : remove_dc(clip_of({0, 0, 0, 0})).samples) EXPECT_EQ(s, 0.0f);
  for (float s : remove_dc(clip_of({5, 5, 5, 5})).samples) EXPECT_EQ(s, 0.0f);
}

TEST(RemoveDc, EmptyClipThrows) { EXPECT_THROW(remove_dc(clip_of({})), InvalidInput); }

TEST(RemoveDc, OutputMeanIsZero) {
  auto out = remove_dc(white_noise(5000, 3));
  double sum = 0;
  for (float s : out.samples) sum += s;
  EXPECT_NEAR(sum / out.size(), 0.0, 1e-6);
}

TEST(PreEmphasis, DirectSubstitution) {
  auto y = pre_emphasis(clip_of({1, 1, 1}), 0.97);
  EXPECT_FLOAT_EQ(y.samples[0], 1.0f);
  EXPECT_NEAR(y.samples[1], 0.03, 1e-7);
  EXPECT_NEAR(y.samples[2], 0.03, 1e-7);
  auto z = pre_emphasis(clip_of({1, 0}), 0.97);
  EXPECT_NEAR(z.samples[1], -0.97, 1e-7);
}

TEST(PreEmphasis, ZeroCoefficientIsIdentity) {
  auto x = white_noise(300, 5);
  EXPECT_EQ(pre_emphasis(x, 0.0).samples, x.samples);
}

TEST(PreEmphasis, CoefficientOutOfRange) {
  EXPECT_THROW(pre_emphasis(clip_of({1, 2}), 1.0), InvalidInput);
  EXPECT_THROW(pre_emphasis(clip_of({1, 2}), -0.1), InvalidInput);
}

TEST(StftPower, OneSecondGives98Frames) {
  auto p = stft_power(clip_of(std::vector<float>(16000, 0.1f)));
  EXPECT_EQ(p.cols, 98);
  EXPECT_EQ(p.rows, 201);
}

TEST(StftPower, ExactlyOneWindowGivesOneFrame) {
  auto p = stft_power(white_noise(400, 1));
  EXPECT_EQ(p.cols, 1);
}

TEST(StftPower, ShorterThanWindowThrows) {
  EXPECT_THROW(stft_power(white_noise(399, 1)), InvalidInput);
}

TEST(StftPower, ZeroClipZeroPower) {
  auto p = stft_power(clip_of(std::vector<float>(1000, 0.0f)));
  for (double v : p.data) EXPECT_EQ(v, 0.0);
}

TEST(StftPower, FrameCountPropertyOverRandomLengths) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> len(400, 40000);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = len(rng);
    const auto p = stft_power(clip_of(std::vector<float>(n, 0.0f)));
    EXPECT_EQ(p.cols, 1 + static_cast<int>((n - 400) / 160)) << "n=" << n;
  }
}

// Brute-force DFT of a Hamming-windowed frame as an independent oracle.
TEST(StftPower, MatchesDirectDft) {
  const auto clip = white_noise(400 + 160 * 2, 9);
  const auto p = stft_power(clip);
  const int w = 400;
  for (int frame = 0; frame < p.cols; ++frame) {
    for (int k : {0, 1, 17, 100, 200}) {
      std::complex<double> acc = 0;
      for (int n = 0; n < w; ++n) {
        const double win = 0.54 - 0.46 * std::cos(2 * std::numbers::pi * n / (w - 1));
        acc += clip.samples[frame * 160 + n] * win *
               std::polar(1.0, -2 * std::numbers::pi * k * n / w);
      }
      EXPECT_NEAR(p(k, frame), std::norm(acc), 1e-9 * (1 + std::norm(acc)));
    }
  }
}

TEST(MelFilterbank, RowsNormalisedNonNegativeAndOverlapping) {
  const auto fb = MelFilterbank::triangular(40, 201, 16000);
  for (int b = 0; b < 40; ++b) {
    double sum = 0;
    for (int k = 0; k < 201; ++k) {
      EXPECT_GE(fb.weight(b, k), 0.0);
      sum += fb.weight(b, k);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  for (int b = 0; b + 1 < 40; ++b) {
    bool shared = false;
    for (int k = 0; k < 201; ++k) shared |= fb.weight(b, k) > 0 && fb.weight(b + 1, k) > 0;
    EXPECT_TRUE(shared) << "bands " << b << " and " << b + 1 << " do not overlap";
  }
}

TEST(MelScale, RoundTrip) {
  for (double hz : {0.0, 100.0, 700.0, 4000.0, 8000.0}) EXPECT_NEAR(mel_to_hz(hz_to_mel(hz)), hz, 1e-9);
  EXPECT_NEAR(hz_to_mel(700.0), 2595.0 * std::log10(2.0), 1e-12);
}

TEST(LogMel, ZeroPowerHitsFloor) {
  Matrix power(201, 5);
  const auto spec = log_mel(power, 16000, 40);
  for (float v : spec.values) EXPECT_FLOAT_EQ(v, static_cast<float>(std::log(kEnergyFloor)));
}

TEST(LogMel, DegenerateSingleFilter) {
  MelFilterbank fb;
  fb.bands = 1;
  fb.bins = 4;
  fb.weights = {1, 1, 1, 1};
  Matrix power(4, 1);
  power(0, 0) = 0.5;
  power(2, 0) = 1.5;
  const auto spec = log_mel(power, fb);
  ASSERT_EQ(spec.bands, 1);
  EXPECT_NEAR(spec.values[0], std::log(2.0), 1e-6);
}

TEST(LogMel, NegativePowerThrows) {
  Matrix power(201, 1);
  power(3, 0) = -1.0;
  EXPECT_THROW(log_mel(power, 16000, 40), InvalidInput);
}

TEST(LogMel, WhiteNoiseShapeAndFiniteness) {
  const auto clip = white_noise(8000, 11);
  const auto spec = log_mel(stft_power(clip), 16000, 40);
  EXPECT_EQ(spec.bands, 40);
  EXPECT_EQ(spec.frames, frame_count(8000, 400, 160));
  for (float v : spec.values) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(v, static_cast<float>(std::log(kEnergyFloor)));
  }
}

TEST(Spectrogram, OneSecondIs40x98) {
  const auto spec = spectrogram(white_noise(16000, 2));
  EXPECT_EQ(spec.bands, 40);
  EXPECT_EQ(spec.frames, 98);
}

TEST(Spectrogram, DeterministicBitForBit) {
  const auto clip = white_noise(12345, 8);
  EXPECT_EQ(spectrogram(clip).values, spectrogram(clip).values);
}

TEST(Spectrogram, ShortClipHasFewerThanEncoderMinimum) {
  const auto spec = spectrogram(white_noise(400 + 160 * 10, 2));
  EXPECT_LT(spec.frames, kMinEncoderFrames);
}

TEST(Spectrogram, EnergyScalesQuadraticallyBeforeLog) {
  const auto x = white_noise(6000, 21);
  const auto fb = MelFilterbank::triangular(40, 201, 16000);
  const auto energy = [&](const AudioClip& c) {
    return mel_energies(stft_power(pre_emphasis(remove_dc(c))), fb);
  };
  const auto base = energy(x);
  for (float a : {2.0f, 0.5f, 3.0f}) {
    AudioClip scaled = x;
    for (auto& s : scaled.samples) s *= a;
    const auto e = energy(scaled);
    double total_base = 0, total_scaled = 0;
    for (double v : base.data) total_base += v;
    for (double v : e.data) total_scaled += v;
    EXPECT_NEAR(total_scaled / total_base, static_cast<double>(a) * a, 1e-5);
  }
}

TEST(BandStats, MeanAndStd) {
  LogMelSpectrogram s{2, 3, {1, 2, 3, 10, 10, 10}};
  BandStats st(2);
  st.add(s);
  EXPECT_NEAR(st.mean()[0], 2.0, 1e-12);
  EXPECT_NEAR(st.mean()[1], 10.0, 1e-12);
  EXPECT_NEAR(st.stddev()[0], std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_NEAR(st.stddev()[1], 1e-5, 1e-12);
  EXPECT_THROW(BandStats(3).mean(), PreconditionError);
}

TEST(Wav, RoundTripAndRateCheck) {
  const auto dir = std::filesystem::temp_directory_path() / "s2i_test_wav";
  std::filesystem::create_directories(dir);
  const auto path = dir / "a.wav";
  auto clip = white_noise(1234, 4);
  write_wav(path, clip);
  const auto back = read_wav(path, 16000);
  ASSERT_EQ(back.size(), clip.size());
  for (std::size_t i = 0; i < clip.size(); ++i) EXPECT_NEAR(back.samples[i], clip.samples[i], 1.0 / 16000);
  EXPECT_THROW(read_wav(path, 8000), InvalidInput);
  EXPECT_THROW(read_wav(dir / "missing.wav"), IoError);
}

TEST(SpectrogramCache, RoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "s2i_cache.bin";
  const auto spec = spectrogram(white_noise(5000, 6));
  write_spectrogram_cache(path, spec);
  const auto back = read_spectrogram_cache(path);
  EXPECT_EQ(back.bands, spec.bands);
  EXPECT_EQ(back.frames, spec.frames);
  EXPECT_EQ(back.values, spec.values);
  EXPECT_EQ(std::filesystem::file_size(path), 8 + spec.values.size() * 4);
}

}  // namespace
}  // namespace s2i::audio
