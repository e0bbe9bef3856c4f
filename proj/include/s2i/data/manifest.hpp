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
#include <string>
#include <vector>

#include "s2i/data/synthetic.hpp"

namespace s2i::data {

// Manifest: UTF-8 CSV, one `wav_path,image_path,class_id` row per spoken
// description. Relative paths resolve against the manifest's directory.
// An optional first row `wav_path,image_path,class_id` is treated as a
// header. If a `classes.json` sits next to the manifest its split and class
// attributes are used; otherwise a split is built over the class ids seen.

struct RowError {
  int line = 0;
  std::string message;
};

struct ManifestOptions {
  int image_size = 64;
  int sample_rate = audio::kDefaultSampleRate;
  double train_fraction = 0.75;
  std::uint64_t seed = 1;
};

struct ManifestLoad {
  PairedDataset dataset;
  std::vector<RowError> skipped;
};

// Throws IoError if the manifest is missing or no row survives validation.
ManifestLoad load_manifest(const std::filesystem::path& path, const ManifestOptions& options = {});

// Writes images/, audio/, manifest.csv and classes.json under `dir`.
void write_dataset(const std::filesystem::path& dir, const PairedDataset& dataset);

}  // namespace s2i::data
