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

#include "s2i/encoder/speech_encoder.hpp"

#include <algorithm>
#include <string>

#include "s2i/core/error.hpp"

namespace s2i::encoder {

void SpeechEncoderConfig::validate() const {
  if (bands < 1) throw InvalidInput("encoder bands must be positive");
  if (channels.empty() || channels.size() != strides.size())
    throw InvalidInput("encoder channels and strides must be non-empty and equally long");
  if (kernel < 1 || kernel % 2 == 0) throw InvalidInput("encoder kernel width must be odd");
  if (hidden < 1 || embedding_dim < 1) throw InvalidInput("encoder sizes must be positive");
  if (total_stride() != kRequiredStride)
    throw InvalidInput("encoder strides multiply to " + std::to_string(total_stride()) +
                       ", expected " + std::to_string(kRequiredStride));
}

int SpeechEncoderConfig::total_stride() const {
  int p = 1;
  for (int s : strides) p *= s;
  return p;
}

nlohmann::json SpeechEncoderConfig::to_json() const {
  return {{"bands", bands},   {"channels", channels}, {"strides", strides},
          {"kernel", kernel}, {"hidden", hidden},     {"embedding_dim", embedding_dim}};
}

SpeechEncoderConfig SpeechEncoderConfig::from_json(const nlohmann::json& j) {
  SpeechEncoderConfig c;
  c.bands = j.value("bands", c.bands);
  c.channels = j.value("channels", c.channels);
  c.strides = j.value("strides", c.strides);
  c.kernel = j.value("kernel", c.kernel);
  c.hidden = j.value("hidden", c.hidden);
  c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
  return c;
}

SpeechEncoderImpl::SpeechEncoderImpl(SpeechEncoderConfig config) : config_(std::move(config)) {
  config_.validate();
  int in = config_.bands;
  for (std::size_t i = 0; i < config_.channels.size(); ++i) {
    const int out = config_.channels[i];
    convs_.push_back(register_module(
        "conv" + std::to_string(i),
        torch::nn::Conv1d(torch::nn::Conv1dOptions(in, out, config_.kernel)
                              .stride(config_.strides[i])
                              .padding(config_.kernel / 2))));
    norms_.push_back(register_module("norm" + std::to_string(i),
                                     torch::nn::LayerNorm(torch::nn::LayerNormOptions({out}))));
    in = out;
  }
  cell_ = register_module("rnn", torch::nn::GRUCell(torch::nn::GRUCellOptions(in, config_.hidden)));
  project_ = register_module("project", torch::nn::Linear(config_.hidden, config_.embedding_dim));
  freq_mean_ = register_buffer("freq_mean", torch::zeros({config_.bands}));
  freq_inv_std_ = register_buffer("freq_inv_std", torch::ones({config_.bands}));
  freq_fitted_ = register_buffer("freq_fitted", torch::zeros({1}));
}

void SpeechEncoderImpl::set_frequency_normalization(std::span<const double> mean,
                                                    std::span<const double> stddev) {
  if (mean.size() != static_cast<std::size_t>(config_.bands) || stddev.size() != mean.size())
    throw InvalidInput("frequency statistics must have one entry per band");
  torch::NoGradGuard no_grad;
  for (int b = 0; b < config_.bands; ++b) {
    if (!(stddev[b] > 0)) throw InvalidInput("frequency stddev must be positive");
    freq_mean_[b] = mean[b];
    freq_inv_std_[b] = 1.0 / stddev[b];
  }
  freq_fitted_.fill_(1.0);
}

bool SpeechEncoderImpl::frequency_normalization_fitted() const {
  return freq_fitted_.item<double>() > 0.5;
}

std::int64_t SpeechEncoderImpl::layer_output_length(std::int64_t frames, int layer) const {
  const int pad = config_.kernel / 2;
  return (frames + 2 * pad - config_.kernel) / config_.strides[layer] + 1;
}

std::int64_t SpeechEncoderImpl::output_length(std::int64_t frames) const {
  for (std::size_t i = 0; i < convs_.size(); ++i) frames = layer_output_length(frames, static_cast<int>(i));
  return frames;
}

namespace {

// [B, T] mask with 1 where t < length.
torch::Tensor length_mask(std::span<const std::int64_t> lengths, std::int64_t steps,
                          const torch::TensorOptions& opts) {
  auto len = torch::tensor(std::vector<std::int64_t>(lengths.begin(), lengths.end()), torch::kInt64);
  auto t = torch::arange(steps, torch::kInt64).unsqueeze(0);
  return t.lt(len.unsqueeze(1)).to(opts.dtype());
}

}  // namespace

torch::Tensor SpeechEncoderImpl::forward(const torch::Tensor& specs, std::span<const std::int64_t> lengths) {
  if (specs.dim() != 3 || specs.size(1) != config_.bands)
    throw InvalidInput("encoder expects [B, " + std::to_string(config_.bands) + ", T] input");
  if (specs.size(0) == 0) throw InvalidInput("empty batch");
  if (static_cast<std::int64_t>(lengths.size()) != specs.size(0))
    throw InvalidInput("one length per batch row is required");
  if (!frequency_normalization_fitted())
    throw PreconditionError("frequency normalisation has not been fitted");
  for (auto len : lengths) {
    if (len < audio::kMinEncoderFrames)
      throw InvalidInput("spectrogram has " + std::to_string(len) + " frames; the encoder needs at least " +
                         std::to_string(audio::kMinEncoderFrames));
    if (len > specs.size(2)) throw InvalidInput("length exceeds padded batch width");
  }

  const auto opts = specs.options();
  std::vector<std::int64_t> lens(lengths.begin(), lengths.end());
  auto x = (specs - freq_mean_.to(opts).view({1, -1, 1})) * freq_inv_std_.to(opts).view({1, -1, 1});
  x = x * length_mask(lens, x.size(2), opts).unsqueeze(1);

  for (std::size_t i = 0; i < convs_.size(); ++i) {
    x = convs_[i]->forward(x);                                   // [B, C, T']
    for (auto& l : lens) l = layer_output_length(l, static_cast<int>(i));
    x = norms_[i]->forward(x.transpose(1, 2)).transpose(1, 2);  // per-frame over channels
    x = torch::leaky_relu(x, 0.1);
    x = x * length_mask(lens, x.size(2), opts).unsqueeze(1);
  }

  const auto steps = x.size(2);
  const auto mask = length_mask(lens, steps, opts);  // [B, steps]
  auto h = torch::zeros({x.size(0), config_.hidden}, opts);
  for (std::int64_t t = 0; t < steps; ++t) {
    auto next = cell_->forward(x.select(2, t), h);
    auto m = mask.select(1, t).unsqueeze(1);
    h = m * next + (1 - m) * h;
  }
  return project_->forward(h);
}

void fit_frequency_normalization(SpeechEncoder& encoder,
                                 std::span<const audio::LogMelSpectrogram* const> specs) {
  if (specs.empty()) throw InvalidInput("no spectrograms to fit frequency statistics on");
  audio::BandStats stats(encoder->config().bands);
  for (const auto* s : specs) stats.add(*s);
  encoder->set_frequency_normalization(stats.mean(), stats.stddev());
}

torch::Tensor encode_padded(SpeechEncoder& encoder, const nn::SpectrogramBatch& batch) {
  return encoder->forward(batch.values.to(encoder->dtype()), batch.lengths);
}

torch::Tensor encode_batch(SpeechEncoder& encoder,
                           std::span<const audio::LogMelSpectrogram* const> specs) {
  if (specs.empty()) throw InvalidInput("empty batch");
  torch::NoGradGuard no_grad;
  const bool was_training = encoder->is_training();
  encoder->eval();
  auto out = encode_padded(encoder, nn::pad_batch(specs));
  encoder->train(was_training);
  return out;
}

torch::Tensor encode(SpeechEncoder& encoder, const audio::LogMelSpectrogram& spec) {
  const audio::LogMelSpectrogram* one[] = {&spec};
  return encode_batch(encoder, one).squeeze(0);
}

torch::Tensor encode_all(SpeechEncoder& encoder, std::span<const audio::LogMelSpectrogram* const> specs,
                         int chunk) {
  if (specs.empty()) throw InvalidInput("nothing to encode");
  std::vector<torch::Tensor> parts;
  for (std::size_t s = 0; s < specs.size(); s += chunk)
    parts.push_back(encode_batch(encoder, specs.subspan(s, std::min<std::size_t>(chunk, specs.size() - s))));
  return torch::cat(parts, 0);
}

}  // namespace s2i::encoder
