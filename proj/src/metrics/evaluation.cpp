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

#include "s2i/metrics/evaluation.hpp"

#include <cstdio>

#include "s2i/core/error.hpp"
#include "s2i/gan/training.hpp"
#include "s2i/nn/checkpoint.hpp"

namespace s2i::metrics {

Eigen::MatrixXd to_eigen(const torch::Tensor& matrix) {
  if (matrix.dim() != 2) throw InvalidInput("expected a matrix");
  const auto t = matrix.detach().to(torch::kFloat64).contiguous();
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      t.data_ptr<double>(), t.size(0), t.size(1));
}

namespace {

nn::ImageClassifier train_on(const data::PairedDataset& dataset, std::vector<int> indices,
                             std::vector<std::int64_t> labels, int classes, const EvalClassifierOptions& options,
                             nn::ClassifierReport* report) {
  auto cfg = options.net;
  cfg.num_classes = classes;
  if (!dataset.images.empty()) cfg.input_size = dataset.images.front().height;
  torch::manual_seed(options.train.seed);
  nn::ImageClassifier net(cfg);
  const auto r = nn::train_classifier(net, dataset.images, indices, labels, options.train);
  net->eval();
  for (auto& p : net->parameters()) p.set_requires_grad(false);
  if (report) *report = r;
  return net;
}

}  // namespace

nn::ImageClassifier train_eval_classifier(const data::PairedDataset& dataset, const EvalClassifierOptions& options,
                                          nn::ClassifierReport* report) {
  const auto& classes = dataset.split.train_classes;
  const auto indices = dataset.images_in(classes);
  std::vector<std::int64_t> labels;
  for (int i : indices)
    labels.push_back(std::lower_bound(classes.begin(), classes.end(), dataset.image_labels[i]) - classes.begin());
  return train_on(dataset, indices, labels, static_cast<int>(classes.size()), options, report);
}

nn::ImageClassifier train_attribute_probe(const data::PairedDataset& dataset, const EvalClassifierOptions& options,
                                          nn::ClassifierReport* report) {
  if (dataset.classes.empty()) throw PreconditionError("the attribute probe needs class attributes");
  std::vector<int> indices;
  std::vector<std::int64_t> labels;
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    indices.push_back(static_cast<int>(i));
    labels.push_back(dataset.class_spec(dataset.image_labels[i]).fill);
  }
  return train_on(dataset, indices, labels, data::kNumColors, options, report);
}

std::string classifier_id(const nn::ImageClassifier& net) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(nn::parameter_hash(*net)));
  return buf;
}

nlohmann::json MetricReport::to_json() const {
  return {{"is_mean", is_mean},     {"is_std", is_std},           {"fid", fid},
          {"n_samples", n_samples}, {"feature_dim", feature_dim}, {"classifier_id", classifier_id}};
}

namespace {

torch::Tensor fit_size(nn::ImageClassifier& classifier, const torch::Tensor& images) {
  const int size = classifier->config().input_size;
  if (images.size(2) == size) return images;
  return torch::nn::functional::interpolate(
      images, torch::nn::functional::InterpolateFuncOptions()
                  .size(std::vector<std::int64_t>{size, size})
                  .mode(torch::kBilinear)
                  .align_corners(false));
}

}  // namespace

GaussianStats feature_stats(nn::ImageClassifier& classifier, const torch::Tensor& images) {
  return fit_gaussian(to_eigen(nn::classifier_features(classifier, fit_size(classifier, images))));
}

MetricReport score_images(nn::ImageClassifier& classifier, const torch::Tensor& fakes, const GaussianStats& real,
                          int is_splits) {
  const auto x = fit_size(classifier, fakes);
  MetricReport r;
  r.n_samples = static_cast<int>(x.size(0));
  r.feature_dim = classifier->config().feature_dim;
  r.classifier_id = classifier_id(classifier);
  r.fid = frechet_distance(fit_gaussian(to_eigen(nn::classifier_features(classifier, x))), real);
  auto probs = to_eigen(nn::classifier_probabilities(classifier, x));
  // renormalise float32 softmax rows in double
  for (Eigen::Index i = 0; i < probs.rows(); ++i) probs.row(i) /= probs.row(i).sum();
  const auto is = inception_score(probs, std::min<int>(is_splits, r.n_samples));
  r.is_mean = is.mean;
  r.is_std = is.std;
  return r;
}

MetricReport evaluate_generation(gan::Generator& generator, const torch::Tensor& conditions,
                                 nn::ImageClassifier& classifier, const GaussianStats& real, int n_samples,
                                 std::uint64_t seed, int is_splits) {
  if (n_samples < 2 || conditions.size(0) < 1) throw InvalidInput("evaluation needs conditions and n_samples >= 2");
  const auto rows = torch::arange(n_samples, torch::kInt64).remainder(conditions.size(0));
  const auto c = conditions.index_select(0, rows);
  const auto z = gan::sample_noise(n_samples, generator->config().noise_dim, seed);
  const auto fakes = gan::generate(generator, c, z).scales.back();
  return score_images(classifier, fakes, real, is_splits);
}

double probe_accuracy(nn::ImageClassifier& probe, const torch::Tensor& images, std::span<const int> fill_labels) {
  if (images.size(0) != static_cast<std::int64_t>(fill_labels.size()) || fill_labels.empty())
    throw InvalidInput("one fill label per image is required");
  const auto pred = nn::classifier_probabilities(probe, fit_size(probe, images)).argmax(1).contiguous();
  auto acc = pred.accessor<std::int64_t, 1>();
  int hits = 0;
  for (std::size_t i = 0; i < fill_labels.size(); ++i) hits += acc[i] == fill_labels[i];
  return static_cast<double>(hits) / fill_labels.size();
}

}  // namespace s2i::metrics
