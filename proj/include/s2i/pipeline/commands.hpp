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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "s2i/audio/frontend.hpp"
#include "s2i/data/synthetic.hpp"
#include "s2i/pipeline/config.hpp"

namespace s2i::pipeline {

// Run directory layout.
struct RunPaths {
  std::filesystem::path root;
  std::filesystem::path data() const { return root / "data"; }
  std::filesystem::path checkpoints() const { return root / "checkpoints"; }
  std::filesystem::path logs() const { return root / "logs"; }
  std::filesystem::path samples() const { return root / "samples"; }
  std::filesystem::path lock() const { return root / "config.lock"; }
  std::filesystem::path report() const { return root / "report.json"; }
  std::filesystem::path teacher() const { return checkpoints() / "teacher.ckpt"; }
  std::filesystem::path encoder() const { return checkpoints() / "encoder.ckpt"; }
  std::filesystem::path gan() const { return checkpoints() / "gan.ckpt"; }
  std::filesystem::path eval_classifier() const { return checkpoints() / "eval_classifier.ckpt"; }
  std::filesystem::path attribute_probe() const { return checkpoints() / "attribute_probe.ckpt"; }
};

// Creates the run directories, records config.lock and applies test mode.
RunPaths open_run(const RunConfig& config);

// External manifest if configured, else the prepared dataset in the run
// directory, else the synthetic dataset rebuilt in memory.
data::PairedDataset load_dataset(const RunConfig& config);

nlohmann::json cmd_prepare_data(const RunConfig& config);
nlohmann::json cmd_train_encoder(const RunConfig& config);
nlohmann::json cmd_train_gan(const RunConfig& config);
nlohmann::json cmd_evaluate(const RunConfig& config);

inline constexpr int kInterpolationFrames = 9;

struct Interpolation {
  std::vector<double> alphas;  // k / 8 for k = 0..8
  torch::Tensor frames;        // [9, 3, S, S], finest scale
  torch::Tensor noise;         // [1, Z], shared by every frame
  torch::Tensor f1, f2;        // [1, D] speech embeddings
};

// Frame k is generated from alpha_k * f1 + (1 - alpha_k) * f2.
Interpolation cmd_interpolate(const RunConfig& config, const audio::AudioClip& clip_a,
                              const audio::AudioClip& clip_b);
Interpolation cmd_interpolate(const RunConfig& config, const std::filesystem::path& wav_a,
                              const std::filesystem::path& wav_b);

enum class AblationAxis { kLossItems, kScales };

AblationAxis ablation_axis_from_string(const std::string& name);

struct AblationRow {
  std::string label;
  double is_mean = 0.0;
  double is_std = 0.0;
  double fid = 0.0;
  std::uint64_t seed = 0;
  int encoder_epochs = 0;
  int gan_iterations = 0;
};

struct AblationTable {
  AblationAxis axis = AblationAxis::kLossItems;
  std::vector<AblationRow> rows;

  std::string csv() const;
  std::string markdown() const;
};

// Trains and evaluates one sub-run per row under <run>/ablate_<axis>/,
// then writes ablation_<axis>.csv and .md into the run directory.
AblationTable cmd_ablate(const RunConfig& config, AblationAxis axis);

}  // namespace s2i::pipeline
