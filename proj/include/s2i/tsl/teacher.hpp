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
#include <vector>

#include <torch/torch.h>

#include "s2i/data/synthetic.hpp"
#include "s2i/nn/checkpoint.hpp"
#include "s2i/nn/image_classifier.hpp"

namespace s2i::tsl {

// Frozen image encoder providing target embeddings. Stands in for an
// ImageNet-pretrained network: a small classifier trained on the training
// classes whose penultimate layer is the embedding.
class TeacherEncoder {
 public:
  TeacherEncoder() = default;
  TeacherEncoder(nn::ImageClassifier net, std::vector<int> class_ids);

  void freeze();
  bool frozen() const { return frozen_; }

  // [B, 3, H, W] -> [B, D]; eval mode, no grad, chunked.
  torch::Tensor embed(const torch::Tensor& images) const;
  int embedding_dim() const;
  const std::vector<int>& class_ids() const { return class_ids_; }
  nn::ImageClassifier& net() { return net_; }
  const nn::ImageClassifier& net() const { return net_; }

  nn::Checkpoint checkpoint() const;
  static TeacherEncoder from_checkpoint(const nn::Checkpoint& ck);

 private:
  nn::ImageClassifier net_{nullptr};
  std::vector<int> class_ids_;
  bool frozen_ = false;
};

struct TeacherTrainOptions {
  nn::ImageClassifierConfig net;  // num_classes is overwritten with the train class count
  nn::ClassifierTrainOptions train{.epochs = 15};
  double min_holdout_accuracy = 0.95;
};

struct TeacherReport {
  nn::ClassifierReport classifier;
  bool below_threshold = false;
};

// Trains on images of the split's training classes only, then freezes.
// Accuracy under the threshold yields a warning and a flagged report.
TeacherEncoder train_teacher(const data::PairedDataset& dataset, const TeacherTrainOptions& options,
                             TeacherReport* report = nullptr);

}  // namespace s2i::tsl
