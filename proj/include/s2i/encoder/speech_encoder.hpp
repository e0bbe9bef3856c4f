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

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "s2i/audio/frontend.hpp"
#include "s2i/nn/tensor.hpp"

namespace s2i::encoder {

// Temporal conv stack followed by a gated recurrent cell. Each conv layer
// is conv1d -> per-frame channel normalisation -> leaky ReLU; the strides
// must multiply to 64 so a 64-frame input leaves exactly one RNN step.
struct SpeechEncoderConfig {
  int bands = audio::kMelBands;
  std::vector<int> channels = {32, 64, 128, 128};
  std::vector<int> strides = {4, 4, 2, 2};
  int kernel = 5;
  int hidden = 128;
  int embedding_dim = 128;

  void validate() const;
  int total_stride() const;
  nlohmann::json to_json() const;
  static SpeechEncoderConfig from_json(const nlohmann::json& j);
};

inline constexpr int kRequiredStride = 64;

class SpeechEncoderImpl : public torch::nn::Module {
 public:
  explicit SpeechEncoderImpl(SpeechEncoderConfig config);

  // Fixed per-band affine applied before the first convolution.
  void set_frequency_normalization(std::span<const double> mean, std::span<const double> stddev);
  bool frequency_normalization_fitted() const;

  // specs: [B, bands, T_max] zero-padded; lengths: true frame counts.
  // Returns [B, embedding_dim]. Frames past each length never influence
  // that row.
  torch::Tensor forward(const torch::Tensor& specs, std::span<const std::int64_t> lengths);

  // Length after one conv layer / the whole stack.
  std::int64_t layer_output_length(std::int64_t frames, int layer) const;
  std::int64_t output_length(std::int64_t frames) const;

  const SpeechEncoderConfig& config() const { return config_; }
  torch::ScalarType dtype() const { return project_->weight.scalar_type(); }

 private:
  SpeechEncoderConfig config_;
  std::vector<torch::nn::Conv1d> convs_;
  std::vector<torch::nn::LayerNorm> norms_;
  torch::nn::GRUCell cell_{nullptr};
  torch::nn::Linear project_{nullptr};
  torch::Tensor freq_mean_;
  torch::Tensor freq_inv_std_;
  torch::Tensor freq_fitted_;
};
TORCH_MODULE(SpeechEncoder);

// Fits the frequency normalisation on training spectrograms.
void fit_frequency_normalization(SpeechEncoder& encoder,
                                 std::span<const audio::LogMelSpectrogram* const> specs);

// Inference-mode embedding of one spectrogram: [embedding_dim].
torch::Tensor encode(SpeechEncoder& encoder, const audio::LogMelSpectrogram& spec);

// Row i equals encode(specs[i]) up to floating-point reassociation.
torch::Tensor encode_batch(SpeechEncoder& encoder,
                           std::span<const audio::LogMelSpectrogram* const> specs);

// Chunked encode_batch for large collections.
torch::Tensor encode_all(SpeechEncoder& encoder, std::span<const audio::LogMelSpectrogram* const> specs,
                         int chunk = 256);

// Training-mode forward with autograd for a padded batch.
torch::Tensor encode_padded(SpeechEncoder& encoder, const nn::SpectrogramBatch& batch);

}  // namespace s2i::encoder
