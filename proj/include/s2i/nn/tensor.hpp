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

#include <span>
#include <vector>

#include <torch/torch.h>

#include "s2i/audio/frontend.hpp"
#include "s2i/data/image.hpp"

namespace s2i::nn {

// [3, H, W] float32 view of an image (copied).
torch::Tensor to_tensor(const data::Image& image);

// [B, 3, H, W] stack of the selected images.
torch::Tensor stack_images(std::span<const data::Image> images, std::span<const int> indices);
torch::Tensor stack_images(std::span<const data::Image> images);

data::Image to_image(const torch::Tensor& chw);

// [bands, frames] float32 copy.
torch::Tensor to_tensor(const audio::LogMelSpectrogram& spec);

// Zero-padded [B, bands, T_max] batch with the true frame counts.
struct SpectrogramBatch {
  torch::Tensor values;
  std::vector<std::int64_t> lengths;
};
SpectrogramBatch pad_batch(std::span<const audio::LogMelSpectrogram* const> specs);

// Average-pools a [B, 3, H, W] batch down to `size` x `size`.
torch::Tensor downsample(const torch::Tensor& images, int size);

}  // namespace s2i::nn
