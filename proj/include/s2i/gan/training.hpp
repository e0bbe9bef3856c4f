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
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "s2i/audio/frontend.hpp"
#include "s2i/data/image.hpp"
#include "s2i/data/synthetic.hpp"
#include "s2i/encoder/speech_encoder.hpp"
#include "s2i/gan/losses.hpp"
#include "s2i/gan/model.hpp"

namespace s2i::gan {

// Conditions from a frozen speech encoder, paired with real image pyramids.
struct GanTrainData {
  torch::Tensor conditions;      // [N, D]
  std::vector<int> labels;       // class per condition
  std::vector<int> image_of;     // row of `real` paired with each condition
  ImagePyramid real;             // [M, 3, s, s] per scale
};

// Real images at every configured scale (average-pool downsampling).
ImagePyramid real_pyramid(std::span<const data::Image> images, std::span<const int> indices,
                          const GanConfig& config);

GanTrainData prepare_gan_data(encoder::SpeechEncoder& encoder, const data::PairedDataset& dataset,
                              std::span<const int> classes, const GanConfig& config);

struct GanTrainOptions {
  int iterations = 20000;
  int batch_size = 16;
  double learning_rate_g = 2e-4;
  double learning_rate_d = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  std::uint64_t seed = 0;
  int log_every = 100;
  int eval_every = 0;           // iterations between FID probes; 0 disables
  int sample_every = 0;         // iterations between sample grids; 0 disables
  std::filesystem::path sample_dir;
  double collapse_threshold = 1e-4;  // per-pixel variance across a fake batch
  double augmentation_kl_weight = 1.0;
};

struct GanLogRow {
  int iteration = 0;
  double d_loss = 0.0;  // mean over the logging window
  double g_loss = 0.0;
  std::optional<double> fid;
};

struct GanTrainResult {
  std::vector<GanLogRow> log;
  int collapse_warnings = 0;
};

using FidProbe = std::function<double(GanModel&)>;

// Alternates one discriminator and one generator Adam step per iteration.
GanTrainResult train_gan(GanModel& model, const GanTrainData& data, const GanTrainOptions& options,
                         const FidProbe& fid_probe = {});

void write_gan_log(const std::string& path, const std::vector<GanLogRow>& rows);

// Eval-mode generation without gradients, `chunk` rows per forward pass.
ImagePyramid generate(Generator& generator, const torch::Tensor& c, const torch::Tensor& z, int chunk = 64);

torch::Tensor sample_noise(int count, int noise_dim, std::uint64_t seed);

// Spectrogram -> speech embedding -> image pyramid for one clip.
ImagePyramid infer(const audio::AudioClip& clip, encoder::SpeechEncoder& encoder, Generator& generator,
                   const torch::Tensor& z);

// Finest-scale grid: one row per condition, one column per noise draw.
data::Image sample_grid(Generator& generator, const torch::Tensor& conditions, const torch::Tensor& noise);

}  // namespace s2i::gan
