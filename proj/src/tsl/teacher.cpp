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

#include "s2i/tsl/teacher.hpp"

#include <algorithm>
#include <sstream>

#include "s2i/core/error.hpp"
#include "s2i/core/log.hpp"

namespace s2i::tsl {

TeacherEncoder::TeacherEncoder(nn::ImageClassifier net, std::vector<int> class_ids)
    : net_(std::move(net)), class_ids_(std::move(class_ids)) {}

void TeacherEncoder::freeze() {
  for (auto& p : net_->parameters()) p.set_requires_grad(false);
  net_->eval();
  frozen_ = true;
}

torch::Tensor TeacherEncoder::embed(const torch::Tensor& images) const {
  if (!net_) throw PreconditionError("teacher has no network");
  auto net = net_;
  return nn::classifier_features(net, images);
}

int TeacherEncoder::embedding_dim() const { return net_->config().feature_dim; }

nn::Checkpoint TeacherEncoder::checkpoint() const {
  return nn::snapshot(*net_, "teacher", {{"net", net_->config().to_json()}, {"class_ids", class_ids_}});
}

TeacherEncoder TeacherEncoder::from_checkpoint(const nn::Checkpoint& ck) {
  const auto cfg = nn::ImageClassifierConfig::from_json(ck.config.at("net"));
  TeacherEncoder t(nn::ImageClassifier(cfg), ck.config.at("class_ids").get<std::vector<int>>());
  nn::restore(*t.net_, ck, "teacher");
  t.freeze();
  return t;
}

TeacherEncoder train_teacher(const data::PairedDataset& dataset, const TeacherTrainOptions& options,
                             TeacherReport* report) {
  const auto& classes = dataset.split.train_classes;
  if (classes.size() < 2) throw InvalidInput("teacher needs at least two training classes");
  auto cfg = options.net;
  cfg.num_classes = static_cast<int>(classes.size());
  if (!dataset.images.empty()) cfg.input_size = dataset.images.front().height;

  const auto indices = dataset.images_in(classes);
  std::vector<std::int64_t> labels;
  for (int i : indices) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), dataset.image_labels[i]);
    labels.push_back(it - classes.begin());
  }
  torch::manual_seed(options.train.seed);
  TeacherEncoder teacher(nn::ImageClassifier(cfg), classes);
  const auto result = nn::train_classifier(teacher.net(), dataset.images, indices, labels, options.train);
  teacher.freeze();

  TeacherReport r{result, result.holdout_accuracy < options.min_holdout_accuracy};
  if (r.below_threshold) {
    std::ostringstream msg;
    msg << "teacher holdout accuracy " << result.holdout_accuracy << " is below "
        << options.min_holdout_accuracy;
    warn(msg.str());
  }
  if (report) *report = r;
  return teacher;
}

}  // namespace s2i::tsl
