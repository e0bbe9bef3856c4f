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

#include <filesystem>
#include <random>

#include "s2i/audio/frontend.hpp"
#include "s2i/core/error.hpp"
#include "s2i/encoder/speech_encoder.hpp"
#include "s2i/nn/checkpoint.hpp"

namespace s2i::encoder {
namespace {

audio::LogMelSpectrogram random_spec(int frames, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> n(-3.0f, 2.0f);
  audio::LogMelSpectrogram s;
  s.bands = audio::kMelBands;
  s.frames = frames;
  s.values.resize(static_cast<std::size_t>(s.bands) * frames);
  for (auto& v : s.values) v = n(rng);
  return s;
}

SpeechEncoder fitted_encoder(SpeechEncoderConfig cfg = {}) {
  torch::manual_seed(2);
  SpeechEncoder enc(cfg);
  std::vector<double> mean(cfg.bands, -3.0), sd(cfg.bands, 2.0);
  enc->set_frequency_normalization(mean, sd);
  return enc;
}

TEST(SpeechEncoderConfig, Validation) {
  SpeechEncoderConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.total_stride(), kRequiredStride);
  c.strides = {4, 4, 2, 1};
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.kernel = 4;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.channels = {32};
  EXPECT_THROW(c.validate(), InvalidInput);
  const SpeechEncoderConfig d;
  EXPECT_EQ(SpeechEncoderConfig::from_json(d.to_json()).to_json(), d.to_json());
}

TEST(SpeechEncoder, OutputLengths) {
  auto enc = fitted_encoder();
  EXPECT_EQ(enc->output_length(64), 1);
  EXPECT_EQ(enc->output_length(640), 10);
  EXPECT_EQ(enc->output_length(98), 2);
}

TEST(SpeechEncoder, EmbeddingShapeAndFinite) {
  auto enc = fitted_encoder();
  const auto e = encode(enc, random_spec(98, 1));
  EXPECT_EQ(e.sizes(), (std::vector<std::int64_t>{128}));
  EXPECT_TRUE(torch::isfinite(e).all().item<bool>());
}

TEST(SpeechEncoder, RejectsShortClips) {
  auto enc = fitted_encoder();
  EXPECT_THROW(encode(enc, random_spec(63, 1)), InvalidInput);
  EXPECT_NO_THROW(encode(enc, random_spec(64, 1)));
}

TEST(SpeechEncoder, RequiresFrequencyNormalisation) {
  SpeechEncoder enc(SpeechEncoderConfig{});
  EXPECT_FALSE(enc->frequency_normalization_fitted());
  EXPECT_THROW(encode(enc, random_spec(100, 1)), PreconditionError);
  const auto a = random_spec(100, 1), b = random_spec(120, 2);
  const audio::LogMelSpectrogram* specs[] = {&a, &b};
  fit_frequency_normalization(enc, specs);
  EXPECT_TRUE(enc->frequency_normalization_fitted());
  EXPECT_NO_THROW(encode(enc, a));
}

TEST(SpeechEncoder, BatchMatchesSingle) {
  auto enc = fitted_encoder();
  const auto a = random_spec(64, 3), b = random_spec(640, 4), c = random_spec(201, 5);
  const audio::LogMelSpectrogram* specs[] = {&a, &b, &c};
  const auto batch = encode_batch(enc, specs);
  for (int i = 0; i < 3; ++i) {
    const auto single = encode(enc, *specs[i]);
    EXPECT_LE((batch[i] - single).abs().max().item<double>(), 1e-6) << "row " << i;
  }
}

TEST(SpeechEncoder, PaddingContentIsIgnored) {
  auto enc = fitted_encoder();
  const auto a = random_spec(100, 6);
  const audio::LogMelSpectrogram* one[] = {&a};
  auto batch = nn::pad_batch(one);
  auto padded = torch::cat({batch.values, torch::randn({1, audio::kMelBands, 50}) * 10}, 2);
  torch::NoGradGuard g;
  enc->eval();
  const auto x = enc->forward(batch.values, batch.lengths);
  const auto y = enc->forward(padded, batch.lengths);
  EXPECT_LE((x - y).abs().max().item<double>(), 1e-6);
}

TEST(SpeechEncoder, CheckpointRoundTrip) {
  auto enc = fitted_encoder();
  const auto path = std::filesystem::temp_directory_path() / "s2i_encoder_test.ckpt";
  nn::save_checkpoint(path, nn::snapshot(*enc, "speech_encoder", enc->config().to_json()));
  const auto ck = nn::load_checkpoint(path);
  SpeechEncoder back(SpeechEncoderConfig::from_json(ck.config));
  nn::restore(*back, ck, "speech_encoder");
  EXPECT_TRUE(back->frequency_normalization_fitted());
  const auto s = random_spec(150, 7);
  EXPECT_TRUE(torch::equal(encode(enc, s), encode(back, s)));
  EXPECT_THROW(nn::restore(*back, ck, "gan"), InvalidInput);
  std::filesystem::remove(path);
}

TEST(SpeechEncoder, EmptyBatchThrows) {
  auto enc = fitted_encoder();
  EXPECT_THROW(encode_batch(enc, {}), InvalidInput);
}

}  // namespace
}  // namespace s2i::encoder
