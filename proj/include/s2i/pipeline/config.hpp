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

#include <nlohmann/json.hpp>

#include "s2i/data/synthetic.hpp"
#include "s2i/encoder/speech_encoder.hpp"
#include "s2i/gan/training.hpp"
#include "s2i/metrics/evaluation.hpp"
#include "s2i/tsl/teacher.hpp"
#include "s2i/tsl/training.hpp"

namespace s2i::pipeline {

struct DataSection {
  data::SyntheticConfig synthetic;
  std::string manifest;  // external CSV; empty means synthetic data
};

struct EncoderSection {
  encoder::SpeechEncoderConfig net;
  tsl::EncoderTrainOptions train;
};

struct GanSection {
  gan::GanConfig net;
  gan::GanTrainOptions train;
};

struct MetricSection {
  metrics::EvalClassifierOptions classifier;
  int n_samples = 1000;
  int is_splits = 10;
};

// Everything one run needs. Stage seeds are derived from `seed`, so a
// config plus seed fully determines every output.
struct RunConfig {
  std::string name = "default";
  std::filesystem::path out = "runs";
  std::uint64_t seed = 7;
  bool test_mode = false;  // single thread, deterministic kernels
  DataSection data;
  tsl::TeacherTrainOptions teacher;
  EncoderSection encoder;
  GanSection gan;
  MetricSection metrics;

  std::filesystem::path run_dir() const { return out / name; }

  // Copies `seed` into every stochastic stage and ties the GAN condition
  // size to the encoder embedding size.
  void resolve();

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

// Sections missing from the file keep their defaults.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace s2i::pipeline
