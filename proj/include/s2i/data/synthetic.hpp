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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s2i/audio/frontend.hpp"
#include "s2i/data/image.hpp"

namespace s2i::data {

enum class Shape { kCircle = 0, kSquare, kTriangle, kCross };
inline constexpr int kNumShapes = 4;
inline constexpr int kNumColors = 8;

struct Rgb {
  float r, g, b;  // [0, 1]
};

std::string_view shape_name(Shape s);
std::string_view fill_word(int color);
std::string_view accent_word(int color);
Rgb palette_color(int color);

// A class is a unique (shape, fill colour, accent colour) triple with
// fill != accent.
struct ClassSpec {
  int class_id = 0;
  Shape shape = Shape::kCircle;
  int fill = 0;
  int accent = 1;

  bool operator==(const ClassSpec&) const = default;
};

inline constexpr int kNumTemplates = 5;

// Word sequence for one of the description templates (5 to 7 words).
std::vector<std::string> describe(const ClassSpec& spec, int template_index);

// `n_classes` distinct triples drawn by a seeded shuffle of all 224.
std::vector<ClassSpec> make_classes(int n_classes, std::uint64_t seed);

// Renders the class object over a nuisance background. The seed controls
// background tint, object position and object size only.
Image render_image(const ClassSpec& spec, std::uint64_t nuisance_seed, int size = 64);

// ---------------------------------------------------------------------------
// Speech
// ---------------------------------------------------------------------------

// Each word is a fixed tone complex: 2-3 partials with an attack/decay
// envelope and a base duration between 150 and 300 ms.
struct WordSignature {
  std::string word;
  std::vector<double> frequencies_hz;
  std::vector<double> amplitudes;
  std::vector<double> phases;
  double duration_s = 0.2;
};

const std::vector<WordSignature>& vocabulary();
const WordSignature& signature(std::string_view word);
bool in_vocabulary(std::string_view word);

struct SpeechOptions {
  int sample_rate = audio::kDefaultSampleRate;
  double duration_jitter = 0.10;   // relative, uniform in [-j, j]
  double amplitude_jitter = 0.20;  // relative, uniform in [-j, j]
  double noise_level = 1e-3;       // additive white noise amplitude
  double gap_s = 0.030;
};

// Waveform for a single word with explicit duration and gain scaling.
audio::AudioClip render_word(const WordSignature& sig, double duration_scale, double gain,
                             int sample_rate = audio::kDefaultSampleRate);

// Concatenates word waveforms separated by silent gaps.
audio::AudioClip render_speech(std::span<const std::string> words, std::uint64_t seed,
                               const SpeechOptions& options = {});

// Shortest possible rendering of a minimum-length description, in samples.
std::size_t min_description_samples(const SpeechOptions& options = {});

// ---------------------------------------------------------------------------
// Splits and datasets
// ---------------------------------------------------------------------------

struct DatasetSplit {
  std::vector<int> train_classes;
  std::vector<int> test_classes;
  int samples_per_class = 0;

  bool is_train(int class_id) const;
  bool is_test(int class_id) const;
  bool operator==(const DatasetSplit&) const = default;
};

// Classes 0..n-1 shuffled under `seed`; round(n * train_fraction) go to
// train, the rest to test. Both lists are sorted.
DatasetSplit build_splits(int n_classes, double train_fraction, int per_class, std::uint64_t seed);

struct SyntheticConfig {
  int n_classes = 40;
  double train_fraction = 0.75;
  int per_class = 200;
  int descriptions_per_image = 2;
  int image_size = 64;
  std::uint64_t seed = 1;
  SpeechOptions speech;
};

// One spoken description of one image.
struct Utterance {
  audio::LogMelSpectrogram spec;
  int image = -1;
  int label = -1;
  std::vector<std::string> words;  // empty for external data
  std::uint64_t speech_seed = 0;
  std::filesystem::path wav_path;  // set for data loaded from a manifest
};

// (image, clip, label) triple as consumed by training code.
struct PairedSample {
  Image image;
  audio::AudioClip clip;
  int label = -1;
};

struct PairedDataset {
  std::vector<ClassSpec> classes;  // empty for external data
  DatasetSplit split;
  std::vector<Image> images;
  std::vector<int> image_labels;
  std::vector<Utterance> utterances;
  SpeechOptions speech;

  // Utterance indices whose label is in `class_ids`, in dataset order.
  std::vector<int> utterances_in(std::span<const int> class_ids) const;
  std::vector<int> images_in(std::span<const int> class_ids) const;
  // Re-renders (synthetic) or re-reads (manifest) the clip of an utterance.
  PairedSample sample(int utterance) const;
  const ClassSpec& class_spec(int class_id) const;
};

PairedDataset make_synthetic(const SyntheticConfig& config);

}  // namespace s2i::data
