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

#include "s2i/data/image.hpp"

namespace s2i::nn {

// Small strided-conv classifier shared by the teacher image encoder, the
// evaluation classifier behind IS/FID and the attribute probe. The
// penultimate linear layer is exposed as the feature vector.
struct ImageClassifierConfig {
  int input_size = 64;
  std::vector<int> channels = {16, 32, 64, 64};  // one stride-2 conv each
  int feature_dim = 128;
  int num_classes = 30;

  nlohmann::json to_json() const;
  static ImageClassifierConfig from_json(const nlohmann::json& j);
};

class ImageClassifierImpl : public torch::nn::Module {
 public:
  explicit ImageClassifierImpl(ImageClassifierConfig config);

  torch::Tensor features(const torch::Tensor& images);
  torch::Tensor forward(const torch::Tensor& images);  // logits
  const ImageClassifierConfig& config() const { return config_; }

 private:
  ImageClassifierConfig config_;
  torch::nn::Sequential trunk_{nullptr};
  torch::nn::Linear embed_{nullptr};
  torch::nn::Linear head_{nullptr};
};
TORCH_MODULE(ImageClassifier);

struct ClassifierTrainOptions {
  int epochs = 8;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double holdout_fraction = 0.1;
  std::uint64_t seed = 1;
};

struct ClassifierReport {
  double train_accuracy = 0.0;
  double holdout_accuracy = 0.0;
  int holdout_size = 0;
};

// Trains on images[indices[i]] with target labels[i] in [0, num_classes).
// A seeded holdout slice is excluded from training and scored at the end.
ClassifierReport train_classifier(ImageClassifier& model, std::span<const data::Image> images,
                                  std::span<const int> indices, std::span<const std::int64_t> labels,
                                  const ClassifierTrainOptions& options);

// Batched inference helpers (eval mode, no grad).
torch::Tensor classifier_features(ImageClassifier& model, const torch::Tensor& images, int batch = 256);
torch::Tensor classifier_probabilities(ImageClassifier& model, const torch::Tensor& images,
                                       int batch = 256);

}  // namespace s2i::nn
