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
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "s2i/data/synthetic.hpp"
#include "s2i/gan/model.hpp"
#include "s2i/metrics/scores.hpp"
#include "s2i/nn/image_classifier.hpp"

namespace s2i::metrics {

Eigen::MatrixXd to_eigen(const torch::Tensor& matrix);

struct EvalClassifierOptions {
  nn::ImageClassifierConfig net{64, {16, 32, 64, 64}, 64, 30};
  nn::ClassifierTrainOptions train{.epochs = 15};
};

// Classifier over the training classes; its penultimate features feed FID
// and its softmax feeds IS.
nn::ImageClassifier train_eval_classifier(const data::PairedDataset& dataset, const EvalClassifierOptions& options,
                                          nn::ClassifierReport* report = nullptr);

// Fill-colour classifier over all real images, used to check that fakes
// follow their condition.
nn::ImageClassifier train_attribute_probe(const data::PairedDataset& dataset, const EvalClassifierOptions& options,
                                          nn::ClassifierReport* report = nullptr);

// Identifier for an evaluation network: hex parameter hash.
std::string classifier_id(const nn::ImageClassifier& net);

struct MetricReport {
  double is_mean = 0.0;
  double is_std = 0.0;
  double fid = 0.0;
  int n_samples = 0;
  int feature_dim = 0;
  std::string classifier_id;

  nlohmann::json to_json() const;
};

// Images are [N, 3, S, S]; they are resized to the classifier's input size.
GaussianStats feature_stats(nn::ImageClassifier& classifier, const torch::Tensor& images);

MetricReport score_images(nn::ImageClassifier& classifier, const torch::Tensor& fakes, const GaussianStats& real,
                          int is_splits = 10);

// Generates one image per row of `conditions` (cycling when n_samples is
// larger) with seeded noise and scores the finest scale.
MetricReport evaluate_generation(gan::Generator& generator, const torch::Tensor& conditions,
                                 nn::ImageClassifier& classifier, const GaussianStats& real, int n_samples,
                                 std::uint64_t seed, int is_splits = 10);

// Accuracy of the probe at recovering `fill_labels` from `images`.
double probe_accuracy(nn::ImageClassifier& probe, const torch::Tensor& images, std::span<const int> fill_labels);

}  // namespace s2i::metrics
