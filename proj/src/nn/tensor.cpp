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

#include "s2i/nn/tensor.hpp"

#include <algorithm>
#include <cstring>

#include "s2i/core/error.hpp"

namespace s2i::nn {

torch::Tensor to_tensor(const data::Image& image) {
  auto t = torch::empty({3, image.height, image.width}, torch::kFloat32);
  std::memcpy(t.data_ptr<float>(), image.pixels.data(), image.pixels.size() * sizeof(float));
  return t;
}

torch::Tensor stack_images(std::span<const data::Image> images, std::span<const int> indices) {
  if (indices.empty()) throw InvalidInput("stack_images: empty selection");
  const auto& first = images[indices[0]];
  auto out = torch::empty({static_cast<std::int64_t>(indices.size()), 3, first.height, first.width},
                          torch::kFloat32);
  const std::size_t per = first.pixels.size();
  float* dst = out.data_ptr<float>();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& img = images[indices[i]];
    if (img.pixels.size() != per) throw InvalidInput("stack_images: images differ in size");
    std::memcpy(dst + i * per, img.pixels.data(), per * sizeof(float));
  }
  return out;
}

torch::Tensor stack_images(std::span<const data::Image> images) {
  std::vector<int> all(images.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return stack_images(images, all);
}

data::Image to_image(const torch::Tensor& chw) {
  if (chw.dim() != 3 || chw.size(0) != 3) throw InvalidInput("to_image expects a [3, H, W] tensor");
  const auto t = chw.detach().to(torch::kFloat32).contiguous();
  data::Image img(static_cast<int>(t.size(1)), static_cast<int>(t.size(2)));
  std::memcpy(img.pixels.data(), t.data_ptr<float>(), img.pixels.size() * sizeof(float));
  return img;
}

torch::Tensor to_tensor(const audio::LogMelSpectrogram& spec) {
  auto t = torch::empty({spec.bands, spec.frames}, torch::kFloat32);
  std::memcpy(t.data_ptr<float>(), spec.values.data(), spec.values.size() * sizeof(float));
  return t;
}

SpectrogramBatch pad_batch(std::span<const audio::LogMelSpectrogram* const> specs) {
  if (specs.empty()) throw InvalidInput("empty spectrogram batch");
  const int bands = specs[0]->bands;
  int max_frames = 0;
  for (const auto* s : specs) {
    if (s->bands != bands) throw InvalidInput("spectrograms in a batch differ in band count");
    max_frames = std::max(max_frames, s->frames);
  }
  SpectrogramBatch batch;
  batch.values = torch::zeros({static_cast<std::int64_t>(specs.size()), bands, max_frames});
  auto acc = batch.values.accessor<float, 3>();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto* s = specs[i];
    for (int b = 0; b < bands; ++b)
      for (int f = 0; f < s->frames; ++f) acc[i][b][f] = s->at(b, f);
    batch.lengths.push_back(s->frames);
  }
  return batch;
}

torch::Tensor downsample(const torch::Tensor& images, int size) {
  const auto h = images.size(2);
  if (h == size) return images;
  if (h % size != 0) throw InvalidInput("downsample: size must divide the image height");
  const auto k = h / size;
  return torch::avg_pool2d(images, {k, k});
}

}  // namespace s2i::nn
