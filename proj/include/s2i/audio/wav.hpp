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

#include <filesystem>
#include <optional>

#include "s2i/audio/frontend.hpp"

namespace s2i::audio {

// Reads a mono 16-bit PCM RIFF/WAVE file. If `expected_rate` is set and
// differs from the file's rate an InvalidInput is thrown (no resampling).
AudioClip read_wav(const std::filesystem::path& path,
                   std::optional<int> expected_rate = std::nullopt);

// Writes mono 16-bit PCM; samples are clipped to [-1, 1].
void write_wav(const std::filesystem::path& path, const AudioClip& clip);

// Spectrogram cache: little-endian {bands:u32, frames:u32} followed by
// bands*frames float32 values, row-major (band, frame).
void write_spectrogram_cache(const std::filesystem::path& path, const LogMelSpectrogram& spec);
LogMelSpectrogram read_spectrogram_cache(const std::filesystem::path& path);

}  // namespace s2i::audio
