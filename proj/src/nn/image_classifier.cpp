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

#include "s2i/nn/image_classifier.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "s2i/core/error.hpp"
#include "s2i/nn/tensor.hpp"

namespace s2i::nn {

nlohmann::json ImageClassifierConfig::to_json() const {
  return {{"input_size", input_size},
          {"channels", channels},
          {"feature_dim", feature_dim},
          {"num_classes", num_classes}};
}

ImageClassifierConfig ImageClassifierConfig::from_json(const nlohmann::json& j) {
  ImageClassifierConfig c;
  c.input_size = j.value("input_size", c.input_size);
  c.channels = j.value("channels", c.channels);
  c.feature_dim = j.value("feature_dim", c.feature_dim);
  c.num_classes = j.value("num_classes", c.num_classes);
  return c;
}

ImageClassifierImpl::ImageClassifierImpl(ImageClassifierConfig config) : config_(std::move(config)) {
  if (config_.channels.empty()) throw InvalidInput("classifier needs at least one conv layer");
  if (config_.num_classes < 2) throw InvalidInput("classifier needs at least two classes");
  int spatial = config_.input_size;
  int in = 3;
  trunk_ = torch::nn::Sequential();
  for (int out : config_.channels) {
    trunk_->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(in, out, 3).stride(2).padding(1)));
    trunk_->push_back(torch::nn::BatchNorm2d(out));
    trunk_->push_back(torch::nn::LeakyReLU(torch::nn::LeakyReLUOptions().negative_slope(0.2)));
    spatial = (spatial + 1) / 2;
    in = out;
  }
  trunk_ = register_module("trunk", trunk_);
  embed_ = register_module("embed", torch::nn::Linear(in * spatial * spatial, config_.feature_dim));
  head_ = register_module("head", torch::nn::Linear(config_.feature_dim, config_.num_classes));
}

torch::Tensor ImageClassifierImpl::features(const torch::Tensor& images) {
  if (images.dim() != 4 || images.size(1) != 3 || images.size(2) != config_.input_size)
    throw InvalidInput("classifier expects [B, 3, " + std::to_string(config_.input_size) + ", " +
                       std::to_string(config_.input_size) + "] input");
  return embed_(trunk_->forward(images).flatten(1));
}

torch::Tensor ImageClassifierImpl::forward(const torch::Tensor& images) { return head_(features(images)); }

ClassifierReport train_classifier(ImageClassifier& model, std::span<const data::Image> images,
                                  std::span<const int> indices, std::span<const std::int64_t> labels,
                                  const ClassifierTrainOptions& options) {
  if (indices.size() != labels.size()) throw InvalidInput("indices and labels differ in length");
  if (indices.empty()) throw InvalidInput("no training images");
  torch::manual_seed(options.seed);
  std::mt19937_64 rng(options.seed);

  std::vector<std::size_t> order(indices.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_hold = static_cast<std::size_t>(options.holdout_fraction * order.size());
  std::vector<std::size_t> holdout(order.begin(), order.begin() + n_hold);
  std::vector<std::size_t> train(order.begin() + n_hold, order.end());

  const auto gather = [&](std::span<const std::size_t> rows) {
    std::vector<int> idx;
    std::vector<std::int64_t> lab;
    for (auto r : rows) {
      idx.push_back(indices[r]);
      lab.push_back(labels[r]);
    }
    return std::pair{stack_images(images, idx), torch::tensor(lab, torch::kInt64)};
  };

  torch::optim::Adam opt(model->parameters(), torch::optim::AdamOptions(options.learning_rate));
  model->train();
  std::int64_t correct = 0, seen = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(train.begin(), train.end(), rng);
    correct = seen = 0;
    for (std::size_t start = 0; start < train.size(); start += options.batch_size) {
      const auto end = std::min(train.size(), start + options.batch_size);
      if (end - start < 2) continue;  // batch norm needs two samples
      auto [x, y] = gather(std::span(train).subspan(start, end - start));
      opt.zero_grad();
      auto logits = model->forward(x);
      auto loss = torch::nn::functional::cross_entropy(logits, y);
      if (!std::isfinite(loss.item<double>())) throw NumericalError("classifier training diverged");
      loss.backward();
      opt.step();
      correct += logits.argmax(1).eq(y).sum().item<std::int64_t>();
      seen += y.size(0);
    }
  }
  ClassifierReport report;
  report.train_accuracy = seen ? static_cast<double>(correct) / seen : 0.0;
  report.holdout_size = static_cast<int>(holdout.size());
  if (!holdout.empty()) {
    auto [x, y] = gather(holdout);
    const auto p = classifier_probabilities(model, x);
    report.holdout_accuracy = p.argmax(1).eq(y).to(torch::kFloat64).mean().item<double>();
  }
  model->eval();
  return report;
}

namespace {

template <typename Fn>
torch::Tensor batched(ImageClassifier& model, const torch::Tensor& images, int batch, Fn fn) {
  torch::NoGradGuard no_grad;
  const bool was_training = model->is_training();
  model->eval();
  std::vector<torch::Tensor> parts;
  for (std::int64_t s = 0; s < images.size(0); s += batch)
    parts.push_back(fn(images.slice(0, s, std::min<std::int64_t>(images.size(0), s + batch))));
  model->train(was_training);
  return torch::cat(parts, 0);
}

}  // namespace

torch::Tensor classifier_features(ImageClassifier& model, const torch::Tensor& images, int batch) {
  return batched(model, images, batch, [&](const torch::Tensor& x) { return model->features(x); });
}

torch::Tensor classifier_probabilities(ImageClassifier& model, const torch::Tensor& images, int batch) {
  return batched(model, images, batch,
                 [&](const torch::Tensor& x) { return torch::softmax(model->forward(x), 1); });
}

}  // namespace s2i::nn
