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

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace s2i::data {

// Planar RGB image, channel-major (C, H, W), values in [-1, 1].
struct Image {
  int height = 0;
  int width = 0;
  std::vector<float> pixels;

  static constexpr int kChannels = 3;

  Image() = default;
  Image(int h, int w, float fill = 0.0f)
      : height(h), width(w), pixels(static_cast<std::size_t>(kChannels) * h * w, fill) {}

  float& at(int c, int y, int x) {
    return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  float at(int c, int y, int x) const {
    return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  bool operator==(const Image&) const = default;
};

// Bilinear resize (align-corners off). Identity when sizes match.
Image resize(const Image& image, int height, int width);

void write_png(const std::filesystem::path& path, const Image& image);
Image read_png(const std::filesystem::path& path);

// Tiles equally sized images row-major into `cols` columns with a
// `padding`-pixel border of value -1.
Image tile(std::span<const Image> images, int cols, int padding = 2);

}  // namespace s2i::data
