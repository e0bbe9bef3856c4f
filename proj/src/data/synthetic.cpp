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

#include "s2i/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "s2i/audio/wav.hpp"
#include "s2i/core/error.hpp"
#include "s2i/core/random.hpp"

namespace s2i::data {

namespace {

constexpr std::array<std::string_view, kNumShapes> kShapeWords = {"circle", "square", "triangle",
                                                                  "cross"};
constexpr std::array<std::string_view, kNumColors> kFillWords = {
    "red", "green", "blue", "yellow", "purple", "orange", "white", "cyan"};
constexpr std::array<std::string_view, kNumColors> kAccentWords = {
    "ruby", "emerald", "sapphire", "golden", "violet", "amber", "pearl", "teal"};
constexpr std::array<std::string_view, 6> kFunctionWords = {"a",   "this", "with",
                                                            "has", "and",  "edge"};
constexpr std::array<Rgb, kNumColors> kPalette = {{{0.90f, 0.10f, 0.10f},
                                                   {0.10f, 0.80f, 0.20f},
                                                   {0.15f, 0.30f, 0.95f},
                                                   {0.95f, 0.90f, 0.10f},
                                                   {0.60f, 0.20f, 0.80f},
                                                   {1.00f, 0.55f, 0.05f},
                                                   {0.97f, 0.97f, 0.97f},
                                                   {0.10f, 0.85f, 0.90f}}};

void check_color(int c) {
  if (c < 0 || c >= kNumColors) throw InvalidInput("colour index out of range");
}

// Membership test in shape-local coordinates scaled so the outline has
// "radius" 1.
bool inside(Shape shape, double u, double v) {
  switch (shape) {
    case Shape::kCircle:
      return u * u + v * v <= 1.0;
    case Shape::kSquare:
      return std::max(std::abs(u), std::abs(v)) <= 0.85;
    case Shape::kTriangle:
      return v <= 0.8 && v >= -1.0 && std::abs(u) <= (v + 1.0) / 1.8;
    case Shape::kCross:
      return (std::abs(u) <= 0.35 && std::abs(v) <= 1.0) ||
             (std::abs(v) <= 0.35 && std::abs(u) <= 1.0);
  }
  return false;
}

std::vector<WordSignature> build_vocabulary() {
  std::vector<std::string_view> words;
  words.insert(words.end(), kFunctionWords.begin(), kFunctionWords.end());
  words.insert(words.end(), kShapeWords.begin(), kShapeWords.end());
  words.insert(words.end(), kFillWords.begin(), kFillWords.end());
  words.insert(words.end(), kAccentWords.begin(), kAccentWords.end());

  // partial frequencies come from a Mel-spaced grid so neighbouring words
  // land in different filterbank bands
  constexpr int kGrid = 40;
  const double lo = audio::hz_to_mel(250.0);
  const double hi = audio::hz_to_mel(6000.0);
  std::array<double, kGrid> grid{};
  for (int i = 0; i < kGrid; ++i) grid[i] = audio::mel_to_hz(lo + (hi - lo) * i / (kGrid - 1));

  std::mt19937_64 rng(0x5eedf00dULL);
  std::vector<std::set<int>> used;
  std::vector<WordSignature> vocab;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const int partials = (w % 2 == 0) ? 3 : 2;
    std::set<int> pick;
    while (true) {
      pick.clear();
      while (static_cast<int>(pick.size()) < partials)
        pick.insert(std::uniform_int_distribution<int>(0, kGrid - 1)(rng));
      bool ok = true;
      for (const auto& other : used) {
        std::vector<int> common;
        std::set_intersection(pick.begin(), pick.end(), other.begin(), other.end(),
                              std::back_inserter(common));
        if (common.size() >= 2) ok = false;
      }
      if (ok) break;
    }
    used.push_back(pick);

    WordSignature sig;
    sig.word = std::string(words[w]);
    double total = 0.0;
    for (int idx : pick) {
      sig.frequencies_hz.push_back(grid[idx]);
      const double a = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
      sig.amplitudes.push_back(a);
      sig.phases.push_back(std::uniform_real_distribution<double>(0.0, 2 * std::numbers::pi)(rng));
      total += a;
    }
    for (double& a : sig.amplitudes) a *= 0.6 / total;
    sig.duration_s = std::uniform_real_distribution<double>(0.150, 0.300)(rng);
    vocab.push_back(std::move(sig));
  }
  return vocab;
}

}  // namespace

std::string_view shape_name(Shape s) { return kShapeWords.at(static_cast<int>(s)); }
std::string_view fill_word(int color) {
  check_color(color);
  return kFillWords[color];
}
std::string_view accent_word(int color) {
  check_color(color);
  return kAccentWords[color];
}
Rgb palette_color(int color) {
  check_color(color);
  return kPalette[color];
}

std::vector<std::string> describe(const ClassSpec& spec, int template_index) {
  const std::string shape(shape_name(spec.shape));
  const std::string fill(fill_word(spec.fill));
  const std::string accent(accent_word(spec.accent));
  switch (template_index) {
    case 0:
      return {"a", fill, shape, "with", accent, "edge"};
    case 1:
      return {"this", fill, shape, "has", accent, "edge"};
    case 2:
      return {"a", fill, shape, "with", accent};
    case 3:
      return {"this", shape, "has", fill, "and", accent};
    case 4:
      return {"a", shape, "with", fill, "and", accent, "edge"};
    default:
      throw InvalidInput("unknown description template " + std::to_string(template_index));
  }
}

std::vector<ClassSpec> make_classes(int n_classes, std::uint64_t seed) {
  std::vector<ClassSpec> all;
  for (int s = 0; s < kNumShapes; ++s)
    for (int f = 0; f < kNumColors; ++f)
      for (int a = 0; a < kNumColors; ++a)
        if (a != f) all.push_back({0, static_cast<Shape>(s), f, a});
  if (n_classes < 1 || n_classes > static_cast<int>(all.size()))
    throw InvalidInput("n_classes must be in [1, " + std::to_string(all.size()) + "]");
  std::mt19937_64 rng(derive_seed(seed, {0xc1a55}));
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(n_classes);
  for (int i = 0; i < n_classes; ++i) all[i].class_id = i;
  return all;
}

Image render_image(const ClassSpec& spec, std::uint64_t nuisance_seed, int size) {
  if (size < 4) throw InvalidInput("image size must be at least 4");
  check_color(spec.fill);
  check_color(spec.accent);
  std::mt19937_64 rng(nuisance_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Rgb bg{static_cast<float>(0.05 + 0.30 * unit(rng)), static_cast<float>(0.05 + 0.30 * unit(rng)),
               static_cast<float>(0.05 + 0.30 * unit(rng))};
  const double gradient = -0.08 + 0.16 * unit(rng);
  const double cx = 0.32 + 0.36 * unit(rng);
  const double cy = 0.32 + 0.36 * unit(rng);
  const double radius = 0.20 + 0.10 * unit(rng);
  constexpr double kInner = 0.6;

  const Rgb fill = kPalette[spec.fill];
  const Rgb accent = kPalette[spec.accent];
  Image img(size, size);
  constexpr int kSuper = 2;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double acc[3] = {0, 0, 0};
      for (int sy = 0; sy < kSuper; ++sy) {
        for (int sx = 0; sx < kSuper; ++sx) {
          const double py = (y + (sy + 0.5) / kSuper) / size;
          const double px = (x + (sx + 0.5) / kSuper) / size;
          const double u = (px - cx) / radius;
          const double v = (py - cy) / radius;
          Rgb c = bg;
          const double shade = gradient * (py - 0.5);
          c = {static_cast<float>(c.r + shade), static_cast<float>(c.g + shade),
               static_cast<float>(c.b + shade)};
          if (inside(spec.shape, u / kInner, v / kInner))
            c = fill;
          else if (inside(spec.shape, u, v))
            c = accent;
          acc[0] += c.r;
          acc[1] += c.g;
          acc[2] += c.b;
        }
      }
      for (int ch = 0; ch < 3; ++ch) {
        const double mean = acc[ch] / (kSuper * kSuper);
        img.at(ch, y, x) = static_cast<float>(std::clamp(2.0 * mean - 1.0, -1.0, 1.0));
      }
    }
  }
  return img;
}

const std::vector<WordSignature>& vocabulary() {
  static const std::vector<WordSignature> vocab = build_vocabulary();
  return vocab;
}

const WordSignature& signature(std::string_view word) {
  for (const auto& sig : vocabulary())
    if (sig.word == word) return sig;
  throw InvalidInput("word '" + std::string(word) + "' is not in the vocabulary");
}

bool in_vocabulary(std::string_view word) {
  const auto& v = vocabulary();
  return std::any_of(v.begin(), v.end(), [&](const auto& s) { return s.word == word; });
}

audio::AudioClip render_word(const WordSignature& sig, double duration_scale, double gain,
                             int sample_rate) {
  const auto n = static_cast<std::size_t>(std::lround(sig.duration_s * duration_scale * sample_rate));
  const auto ramp = static_cast<std::size_t>(std::lround(0.010 * sample_rate));
  audio::AudioClip clip{std::vector<float>(n, 0.0f), sample_rate};
  for (std::size_t t = 0; t < n; ++t) {
    double env = 1.0;
    if (t < ramp)
      env = 0.5 - 0.5 * std::cos(std::numbers::pi * t / ramp);
    else if (n - 1 - t < ramp)
      env = 0.5 - 0.5 * std::cos(std::numbers::pi * (n - 1 - t) / ramp);
    double s = 0.0;
    for (std::size_t k = 0; k < sig.frequencies_hz.size(); ++k)
      s += sig.amplitudes[k] *
           std::sin(2.0 * std::numbers::pi * sig.frequencies_hz[k] * t / sample_rate + sig.phases[k]);
    clip.samples[t] = static_cast<float>(gain * env * s);
  }
  return clip;
}

audio::AudioClip render_speech(std::span<const std::string> words, std::uint64_t seed,
                               const SpeechOptions& options) {
  if (words.empty()) throw InvalidInput("cannot render an empty word sequence");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  const auto gap = static_cast<std::size_t>(std::lround(options.gap_s * options.sample_rate));

  audio::AudioClip clip{{}, options.sample_rate};
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& sig = signature(words[i]);
    const double dscale = 1.0 + options.duration_jitter * sym(rng);
    const double gain = 1.0 + options.amplitude_jitter * sym(rng);
    if (i > 0) clip.samples.insert(clip.samples.end(), gap, 0.0f);
    const auto w = render_word(sig, dscale, gain, options.sample_rate);
    clip.samples.insert(clip.samples.end(), w.samples.begin(), w.samples.end());
  }
  if (options.noise_level > 0.0)
    for (auto& s : clip.samples) s += static_cast<float>(options.noise_level * sym(rng));
  return clip;
}

std::size_t min_description_samples(const SpeechOptions& options) {
  constexpr std::size_t kMinWords = 5;
  std::vector<double> durations;
  for (const auto& sig : vocabulary()) durations.push_back(sig.duration_s);
  std::sort(durations.begin(), durations.end());
  std::size_t total = 0;
  for (std::size_t i = 0; i < kMinWords; ++i)
    total += static_cast<std::size_t>(
        std::floor(durations[i] * (1.0 - options.duration_jitter) * options.sample_rate));
  total += (kMinWords - 1) * static_cast<std::size_t>(std::lround(options.gap_s * options.sample_rate));
  return total;
}

bool DatasetSplit::is_train(int class_id) const {
  return std::binary_search(train_classes.begin(), train_classes.end(), class_id);
}

bool DatasetSplit::is_test(int class_id) const {
  return std::binary_search(test_classes.begin(), test_classes.end(), class_id);
}

DatasetSplit build_splits(int n_classes, double train_fraction, int per_class, std::uint64_t seed) {
  if (n_classes < 4) throw InvalidInput("need at least 4 classes for a zero-shot split");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw InvalidInput("train_fraction must lie strictly between 0 and 1");
  if (per_class < 1) throw InvalidInput("per_class must be positive");
  const auto n_train = static_cast<int>(std::llround(n_classes * train_fraction));
  if (n_train < 1) throw InvalidInput("split leaves no training class");
  if (n_classes - n_train < 1) throw InvalidInput("split leaves no test class");

  std::vector<int> ids(n_classes);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(derive_seed(seed, {0x5b117}));
  std::shuffle(ids.begin(), ids.end(), rng);
  DatasetSplit split;
  split.train_classes.assign(ids.begin(), ids.begin() + n_train);
  split.test_classes.assign(ids.begin() + n_train, ids.end());
  std::sort(split.train_classes.begin(), split.train_classes.end());
  std::sort(split.test_classes.begin(), split.test_classes.end());
  split.samples_per_class = per_class;
  return split;
}

std::vector<int> PairedDataset::utterances_in(std::span<const int> class_ids) const {
  std::set<int> wanted(class_ids.begin(), class_ids.end());
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(utterances.size()); ++i)
    if (wanted.count(utterances[i].label)) out.push_back(i);
  return out;
}

std::vector<int> PairedDataset::images_in(std::span<const int> class_ids) const {
  std::set<int> wanted(class_ids.begin(), class_ids.end());
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(images.size()); ++i)
    if (wanted.count(image_labels[i])) out.push_back(i);
  return out;
}

PairedSample PairedDataset::sample(int utterance) const {
  const auto& u = utterances.at(utterance);
  if (!u.wav_path.empty()) return {images.at(u.image), audio::read_wav(u.wav_path), u.label};
  if (u.words.empty()) throw PreconditionError("utterance has no word sequence to re-render");
  return {images.at(u.image), render_speech(u.words, u.speech_seed, speech), u.label};
}

const ClassSpec& PairedDataset::class_spec(int class_id) const {
  for (const auto& c : classes)
    if (c.class_id == class_id) return c;
  throw InvalidInput("no attribute spec for class " + std::to_string(class_id));
}

PairedDataset make_synthetic(const SyntheticConfig& config) {
  if (config.descriptions_per_image < 1) throw InvalidInput("descriptions_per_image must be >= 1");
  PairedDataset ds;
  ds.classes = make_classes(config.n_classes, config.seed);
  ds.split = build_splits(config.n_classes, config.train_fraction, config.per_class, config.seed);
  ds.speech = config.speech;

  const std::size_t n_images = static_cast<std::size_t>(config.n_classes) * config.per_class;
  ds.images.reserve(n_images);
  ds.image_labels.reserve(n_images);
  ds.utterances.reserve(n_images * config.descriptions_per_image);
  for (const auto& cls : ds.classes) {
    for (int i = 0; i < config.per_class; ++i) {
      const auto img_seed = derive_seed(config.seed, {1, static_cast<std::uint64_t>(cls.class_id),
                                                      static_cast<std::uint64_t>(i)});
      const int image_index = static_cast<int>(ds.images.size());
      ds.images.push_back(render_image(cls, img_seed, config.image_size));
      ds.image_labels.push_back(cls.class_id);
      for (int k = 0; k < config.descriptions_per_image; ++k) {
        const auto speech_seed = derive_seed(
            config.seed, {2, static_cast<std::uint64_t>(cls.class_id), static_cast<std::uint64_t>(i),
                          static_cast<std::uint64_t>(k)});
        Utterance u;
        u.words = describe(cls, static_cast<int>(splitmix64(speech_seed) % kNumTemplates));
        u.speech_seed = speech_seed;
        u.image = image_index;
        u.label = cls.class_id;
        u.spec = audio::spectrogram(render_speech(u.words, speech_seed, config.speech));
        ds.utterances.push_back(std::move(u));
      }
    }
  }
  return ds;
}

}  // namespace s2i::data
