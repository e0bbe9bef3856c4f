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

#include "s2i/audio/wav.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "s2i/core/error.hpp"

namespace s2i::audio {

namespace {

static_assert(std::endian::native == std::endian::little,
              "file formats assume a little-endian host");

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <typename T>
T read_le(const std::vector<char>& buf, std::size_t offset) {
  if (offset + sizeof(T) > buf.size()) throw IoError("truncated file");
  T v;
  std::memcpy(&v, buf.data() + offset, sizeof(T));
  return v;
}

template <typename T>
void write_le(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

AudioClip read_wav(const std::filesystem::path& path, std::optional<int> expected_rate) {
  const auto buf = slurp(path);
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    throw IoError(path.string() + ": not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::string id(buf.data() + pos, 4);
    const auto size = read_le<std::uint32_t>(buf, pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt ") {
      format = read_le<std::uint16_t>(buf, body);
      channels = read_le<std::uint16_t>(buf, body + 2);
      rate = read_le<std::uint32_t>(buf, body + 4);
      bits = read_le<std::uint16_t>(buf, body + 14);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw IoError(path.string() + ": data chunk before fmt chunk");
      if (format != 1 || bits != 16) throw IoError(path.string() + ": only 16-bit PCM is supported");
      if (channels != 1) throw IoError(path.string() + ": only mono audio is supported");
      if (expected_rate && static_cast<int>(rate) != *expected_rate)
        throw InvalidInput(path.string() + ": sample rate " + std::to_string(rate) +
                           " does not match expected " + std::to_string(*expected_rate));
      const std::size_t n = std::min<std::size_t>(size, buf.size() - body) / 2;
      AudioClip clip{std::vector<float>(n), static_cast<int>(rate)};
      for (std::size_t i = 0; i < n; ++i)
        clip.samples[i] = read_le<std::int16_t>(buf, body + 2 * i) / 32768.0f;
      return clip;
    }
    pos = body + size + (size & 1u);
  }
  throw IoError(path.string() + ": no data chunk");
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  out.write("RIFF", 4);
  write_le<std::uint32_t>(out, 36 + data_bytes);
  out.write("WAVEfmt ", 8);
  write_le<std::uint32_t>(out, 16);
  write_le<std::uint16_t>(out, 1);
  write_le<std::uint16_t>(out, 1);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(clip.sample_rate));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(clip.sample_rate * 2));
  write_le<std::uint16_t>(out, 2);
  write_le<std::uint16_t>(out, 16);
  out.write("data", 4);
  write_le<std::uint32_t>(out, data_bytes);
  for (float s : clip.samples) {
    const float c = std::clamp(s, -1.0f, 1.0f);
    write_le<std::int16_t>(out, static_cast<std::int16_t>(std::lround(c * 32767.0f)));
  }
  if (!out) throw IoError("short write to " + path.string());
}

void write_spectrogram_cache(const std::filesystem::path& path, const LogMelSpectrogram& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.bands));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.frames));
  out.write(reinterpret_cast<const char*>(spec.values.data()),
            static_cast<std::streamsize>(spec.values.size() * sizeof(float)));
  if (!out) throw IoError("short write to " + path.string());
}

LogMelSpectrogram read_spectrogram_cache(const std::filesystem::path& path) {
  const auto buf = slurp(path);
  LogMelSpectrogram spec;
  spec.bands = static_cast<int>(read_le<std::uint32_t>(buf, 0));
  spec.frames = static_cast<int>(read_le<std::uint32_t>(buf, 4));
  const std::size_t n = static_cast<std::size_t>(spec.bands) * spec.frames;
  if (buf.size() != 8 + n * sizeof(float))
    throw IoError(path.string() + ": spectrogram cache size does not match header");
  spec.values.resize(n);
  std::memcpy(spec.values.data(), buf.data() + 8, n * sizeof(float));
  return spec;
}

}  // namespace s2i::audio
