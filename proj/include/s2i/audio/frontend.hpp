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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace s2i::audio {

inline constexpr int kDefaultSampleRate = 16000;
inline constexpr int kMelBands = 40;
inline constexpr double kWindowMs = 25.0;
inline constexpr double kHopMs = 10.0;
inline constexpr double kPreEmphasis = 0.97;
inline constexpr double kEnergyFloor = 1e-10;
// The speech encoder shortens time by 64x and needs at least this many frames.
inline constexpr int kMinEncoderFrames = 64;

// Raw single-channel waveform.
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
};

// Dense row-major matrix used for spectra: rows are frequency, columns time.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// bands x frames matrix of natural-log Mel energies.
struct LogMelSpectrogram {
  int bands = 0;
  int frames = 0;
  std::vector<float> values;  // row-major, bands x frames

  float at(int band, int frame) const {
    return values[static_cast<std::size_t>(band) * frames + frame];
  }
};

// Samples in a window of `ms` milliseconds, rounded to nearest.
int samples_for_ms(double ms, int sample_rate);

// 1 + floor((N - W) / H), or 0 when N < W.
int frame_count(std::size_t num_samples, int window, int hop);

AudioClip remove_dc(const AudioClip& clip);

// y[0] = x[0]; y[t] = x[t] - coef * x[t-1]. Requires 0 <= coef < 1.
AudioClip pre_emphasis(const AudioClip& clip, double coef = kPreEmphasis);

// Squared DFT magnitude of Hamming-windowed frames. Result is
// (window/2 + 1) x frames; DFT length equals the window length.
Matrix stft_power(const AudioClip& clip, double window_ms = kWindowMs, double hop_ms = kHopMs);

// Triangular filters on the Mel scale mel(f) = 2595 log10(1 + f/700),
// spanning [0, sample_rate/2]. Each row is divided by its area so every
// filter's weights sum to one.
struct MelFilterbank {
  int bands = 0;
  int bins = 0;
  std::vector<double> weights;  // bands x bins

  static MelFilterbank triangular(int bands, int fft_bins, int sample_rate);
  double weight(int band, int bin) const {
    return weights[static_cast<std::size_t>(band) * bins + bin];
  }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Filterbank energies before the log (bands x frames).
Matrix mel_energies(const Matrix& power, const MelFilterbank& filterbank);

LogMelSpectrogram log_mel(const Matrix& power, const MelFilterbank& filterbank,
                          double floor = kEnergyFloor);
LogMelSpectrogram log_mel(const Matrix& power, int sample_rate, int bands = kMelBands);

// remove_dc -> pre_emphasis -> stft_power -> log_mel with the default
// framing (25 ms Hamming, 10 ms hop) and 40 bands.
LogMelSpectrogram spectrogram(const AudioClip& clip);

// Per-band running statistics, used to fit the speech encoder's
// frequency normalisation.
class BandStats {
 public:
  explicit BandStats(int bands = kMelBands);

  void add(const LogMelSpectrogram& spec);
  int bands() const { return static_cast<int>(sum_.size()); }
  std::int64_t count() const { return count_; }
  std::vector<double> mean() const;
  // Population standard deviation, floored at 1e-5.
  std::vector<double> stddev() const;

 private:
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::int64_t count_ = 0;
};

}  // namespace s2i::audio
