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

#include "s2i/audio/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

#include <unsupported/Eigen/FFT>

#include "s2i/core/error.hpp"

namespace s2i::audio {

namespace {

void require_valid(const AudioClip& clip) {
  if (clip.sample_rate <= 0) throw InvalidInput("sample_rate must be positive");
  if (clip.samples.empty()) throw InvalidInput("audio clip is empty");
}

std::vector<double> hamming(int length) {
  std::vector<double> w(length);
  if (length == 1) {
    w[0] = 1.0;
    return w;
  }
  for (int n = 0; n < length; ++n)
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (length - 1));
  return w;
}

}  // namespace

int samples_for_ms(double ms, int sample_rate) {
  return static_cast<int>(std::lround(ms * 1e-3 * sample_rate));
}

int frame_count(std::size_t num_samples, int window, int hop) {
  if (window <= 0 || hop <= 0) throw InvalidInput("window and hop must be positive");
  if (num_samples < static_cast<std::size_t>(window)) return 0;
  return 1 + static_cast<int>((num_samples - window) / hop);
}

AudioClip remove_dc(const AudioClip& clip) {
  require_valid(clip);
  double mean = std::accumulate(clip.samples.begin(), clip.samples.end(), 0.0) /
                static_cast<double>(clip.samples.size());
  AudioClip out{std::vector<float>(clip.samples.size()), clip.sample_rate};
  std::transform(clip.samples.begin(), clip.samples.end(), out.samples.begin(),
                 [mean](float x) { return static_cast<float>(x - mean); });
  return out;
}

AudioClip pre_emphasis(const AudioClip& clip, double coef) {
  require_valid(clip);
  if (!(coef >= 0.0 && coef < 1.0))
    throw InvalidInput("pre-emphasis coefficient must lie in [0, 1)");
  AudioClip out{std::vector<float>(clip.samples.size()), clip.sample_rate};
  out.samples[0] = clip.samples[0];
  for (std::size_t t = 1; t < clip.samples.size(); ++t)
    out.samples[t] = static_cast<float>(clip.samples[t] - coef * clip.samples[t - 1]);
  return out;
}

Matrix stft_power(const AudioClip& clip, double window_ms, double hop_ms) {
  require_valid(clip);
  const int window = samples_for_ms(window_ms, clip.sample_rate);
  const int hop = samples_for_ms(hop_ms, clip.sample_rate);
  if (window < 2 || hop < 1) throw InvalidInput("window/hop too short for sample rate");
  const int frames = frame_count(clip.size(), window, hop);
  if (frames == 0)
    throw InvalidInput("clip of " + std::to_string(clip.size()) +
                       " samples is shorter than one window of " + std::to_string(window));

  const int bins = window / 2 + 1;
  const auto taper = hamming(window);
  Matrix power(bins, frames);

  Eigen::FFT<double> fft;
  std::vector<double> frame(window);
  std::vector<std::complex<double>> spectrum;
  for (int f = 0; f < frames; ++f) {
    const std::size_t start = static_cast<std::size_t>(f) * hop;
    for (int n = 0; n < window; ++n) frame[n] = clip.samples[start + n] * taper[n];
    fft.fwd(spectrum, frame);
    for (int k = 0; k < bins; ++k) power(k, f) = std::norm(spectrum[k]);
  }
  return power;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank MelFilterbank::triangular(int bands, int fft_bins, int sample_rate) {
  if (bands < 1) throw InvalidInput("filterbank needs at least one band");
  if (fft_bins < 2) throw InvalidInput("filterbank needs at least two FFT bins");
  if (sample_rate <= 0) throw InvalidInput("sample_rate must be positive");

  MelFilterbank fb;
  fb.bands = bands;
  fb.bins = fft_bins;
  fb.weights.assign(static_cast<std::size_t>(bands) * fft_bins, 0.0);

  const double nyquist = sample_rate / 2.0;
  const double mel_max = hz_to_mel(nyquist);
  const double mel_step = mel_max / (bands + 1);
  // bins span [0, nyquist] evenly
  const double bin_hz = nyquist / (fft_bins - 1);

  for (int b = 0; b < bands; ++b) {
    const double left = b * mel_step;
    const double center = (b + 1) * mel_step;
    const double right = (b + 2) * mel_step;
    double area = 0.0;
    for (int k = 0; k < fft_bins; ++k) {
      const double mel = hz_to_mel(k * bin_hz);
      double w = 0.0;
      if (mel > left && mel <= center)
        w = (mel - left) / (center - left);
      else if (mel > center && mel < right)
        w = (right - mel) / (right - center);
      fb.weights[static_cast<std::size_t>(b) * fft_bins + k] = w;
      area += w;
    }
    if (area <= 0.0)
      throw InvalidInput("Mel band " + std::to_string(b) + " covers no FFT bin; too many bands");
    for (int k = 0; k < fft_bins; ++k) fb.weights[static_cast<std::size_t>(b) * fft_bins + k] /= area;
  }
  return fb;
}

Matrix mel_energies(const Matrix& power, const MelFilterbank& filterbank) {
  if (power.rows != filterbank.bins)
    throw InvalidInput("power spectrum has " + std::to_string(power.rows) +
                       " bins but filterbank expects " + std::to_string(filterbank.bins));
  for (double v : power.data)
    if (!(v >= 0.0)) throw InvalidInput("power spectrum entries must be non-negative");

  Matrix out(filterbank.bands, power.cols);
  for (int b = 0; b < filterbank.bands; ++b) {
    for (int k = 0; k < filterbank.bins; ++k) {
      const double w = filterbank.weight(b, k);
      if (w == 0.0) continue;
      for (int f = 0; f < power.cols; ++f) out(b, f) += w * power(k, f);
    }
  }
  return out;
}

LogMelSpectrogram log_mel(const Matrix& power, const MelFilterbank& filterbank, double floor) {
  if (!(floor > 0.0)) throw InvalidInput("energy floor must be positive");
  const Matrix energy = mel_energies(power, filterbank);
  LogMelSpectrogram spec;
  spec.bands = energy.rows;
  spec.frames = energy.cols;
  spec.values.resize(energy.data.size());
  std::transform(energy.data.begin(), energy.data.end(), spec.values.begin(),
                 [floor](double e) { return static_cast<float>(std::log(std::max(e, floor))); });
  return spec;
}

LogMelSpectrogram log_mel(const Matrix& power, int sample_rate, int bands) {
  return log_mel(power, MelFilterbank::triangular(bands, power.rows, sample_rate));
}

LogMelSpectrogram spectrogram(const AudioClip& clip) {
  const Matrix power = stft_power(pre_emphasis(remove_dc(clip)));
  return log_mel(power, clip.sample_rate, kMelBands);
}

BandStats::BandStats(int bands) : sum_(bands, 0.0), sum_sq_(bands, 0.0) {}

void BandStats::add(const LogMelSpectrogram& spec) {
  if (spec.bands != bands())
    throw InvalidInput("band count mismatch in BandStats::add");
  for (int b = 0; b < spec.bands; ++b) {
    for (int f = 0; f < spec.frames; ++f) {
      const double v = spec.at(b, f);
      sum_[b] += v;
      sum_sq_[b] += v * v;
    }
  }
  count_ += spec.frames;
}

std::vector<double> BandStats::mean() const {
  if (count_ == 0) throw PreconditionError("BandStats has no frames");
  std::vector<double> m(sum_.size());
  for (std::size_t b = 0; b < m.size(); ++b) m[b] = sum_[b] / static_cast<double>(count_);
  return m;
}

std::vector<double> BandStats::stddev() const {
  const auto m = mean();
  std::vector<double> s(m.size());
  for (std::size_t b = 0; b < m.size(); ++b) {
    const double var = sum_sq_[b] / static_cast<double>(count_) - m[b] * m[b];
    s[b] = std::max(std::sqrt(std::max(var, 0.0)), 1e-5);
  }
  return s;
}

}  // namespace s2i::audio
