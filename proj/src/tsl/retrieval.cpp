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

#include "s2i/tsl/retrieval.hpp"

#include <algorithm>
#include <map>

#include "s2i/core/error.hpp"
#include "s2i/nn/tensor.hpp"

namespace s2i::tsl {

RetrievalMetrics rank_retrieval(const torch::Tensor& queries, std::span<const int> query_labels,
                                const torch::Tensor& gallery, std::span<const int> gallery_labels) {
  if (queries.dim() != 2 || gallery.dim() != 2 || queries.size(1) != gallery.size(1))
    throw InvalidInput("retrieval expects [Q, D] queries and [G, D] gallery");
  if (queries.size(0) != static_cast<std::int64_t>(query_labels.size()) ||
      gallery.size(0) != static_cast<std::int64_t>(gallery_labels.size()))
    throw InvalidInput("one label per retrieval row is required");
  if (queries.size(0) == 0 || gallery.size(0) == 0) throw InvalidInput("empty retrieval set");

  torch::NoGradGuard no_grad;
  const auto scores = queries.to(torch::kFloat64).matmul(gallery.to(torch::kFloat64).t());
  const auto k = std::min<std::int64_t>(5, gallery.size(0));
  const auto top = std::get<1>(scores.topk(k, 1)).contiguous();
  auto acc = top.accessor<std::int64_t, 2>();

  std::map<int, int> per_class;
  for (int l : gallery_labels) ++per_class[l];

  RetrievalMetrics m;
  m.queries = static_cast<int>(query_labels.size());
  m.gallery = static_cast<int>(gallery_labels.size());
  for (int q = 0; q < m.queries; ++q) {
    const int label = query_labels[q];
    if (gallery_labels[acc[q][0]] == label) m.recall_at_1 += 1;
    for (std::int64_t r = 0; r < k; ++r) {
      if (gallery_labels[acc[q][r]] == label) {
        m.recall_at_5 += 1;
        break;
      }
    }
    m.chance_at_1 += static_cast<double>(per_class[label]) / m.gallery;
  }
  m.recall_at_1 /= m.queries;
  m.recall_at_5 /= m.queries;
  m.chance_at_1 /= m.queries;
  return m;
}

namespace {

struct Embedded {
  torch::Tensor speech;
  std::vector<int> speech_labels;
  torch::Tensor images;
  std::vector<int> image_labels;
};

Embedded embed_classes(encoder::SpeechEncoder& encoder, const TeacherEncoder& teacher,
                       const data::PairedDataset& dataset, std::span<const int> classes) {
  Embedded e;
  std::vector<const audio::LogMelSpectrogram*> specs;
  for (int u : dataset.utterances_in(classes)) {
    specs.push_back(&dataset.utterances[u].spec);
    e.speech_labels.push_back(dataset.utterances[u].label);
  }
  const auto imgs = dataset.images_in(classes);
  if (specs.empty() || imgs.empty()) throw InvalidInput("no data for the requested classes");
  for (int i : imgs) e.image_labels.push_back(dataset.image_labels[i]);
  e.speech = encoder::encode_all(encoder, specs);
  e.images = teacher.embed(nn::stack_images(dataset.images, imgs));
  return e;
}

}  // namespace

RetrievalMetrics retrieval_eval(encoder::SpeechEncoder& encoder, const TeacherEncoder& teacher,
                                const data::PairedDataset& dataset, std::span<const int> classes) {
  const auto e = embed_classes(encoder, teacher, dataset, classes);
  return rank_retrieval(e.speech, e.speech_labels, e.images, e.image_labels);
}

RetrievalMetrics aligned_retrieval_eval(encoder::SpeechEncoder& encoder, const TeacherEncoder& teacher,
                                        const data::PairedDataset& dataset, double ridge) {
  torch::NoGradGuard no_grad;
  // fit W minimising |[S 1] W - V|^2 + ridge |W|^2 on training pairs
  std::vector<const audio::LogMelSpectrogram*> specs;
  std::vector<int> paired_images;
  for (int u : dataset.utterances_in(dataset.split.train_classes)) {
    specs.push_back(&dataset.utterances[u].spec);
    paired_images.push_back(dataset.utterances[u].image);
  }
  const auto s = encoder::encode_all(encoder, specs).to(torch::kFloat64);
  const auto v = teacher.embed(nn::stack_images(dataset.images, paired_images)).to(torch::kFloat64);
  const auto x = torch::cat({s, torch::ones({s.size(0), 1}, s.options())}, 1);
  const auto gram = x.t().matmul(x) + ridge * x.size(0) * torch::eye(x.size(1), x.options());
  const auto w = torch::linalg_solve(gram, x.t().matmul(v));

  auto e = embed_classes(encoder, teacher, dataset, dataset.split.test_classes);
  auto q = e.speech.to(torch::kFloat64);
  q = torch::cat({q, torch::ones({q.size(0), 1}, q.options())}, 1).matmul(w);
  return rank_retrieval(q, e.speech_labels, e.images, e.image_labels);
}

}  // namespace s2i::tsl
