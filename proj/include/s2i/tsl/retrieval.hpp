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

#include <span>

#include <torch/torch.h>

#include "s2i/data/synthetic.hpp"
#include "s2i/encoder/speech_encoder.hpp"
#include "s2i/tsl/teacher.hpp"

namespace s2i::tsl {

// Class-level speech->image retrieval: a query scores a hit at k when one
// of its k highest dot-product gallery items shares its class.
struct RetrievalMetrics {
  double recall_at_1 = 0.0;
  double recall_at_5 = 0.0;
  double chance_at_1 = 0.0;  // expected recall@1 of a random ranking
  int queries = 0;
  int gallery = 0;
};

RetrievalMetrics rank_retrieval(const torch::Tensor& queries, std::span<const int> query_labels,
                                const torch::Tensor& gallery, std::span<const int> gallery_labels);

// Speech embeddings of the utterances of `classes` against teacher
// embeddings of their images.
RetrievalMetrics retrieval_eval(encoder::SpeechEncoder& encoder, const TeacherEncoder& teacher,
                                const data::PairedDataset& dataset, std::span<const int> classes);

// Same protocol after a ridge-regression map from speech embeddings to
// teacher embeddings, fitted on training-class pairs. Puts encoders trained
// without the teacher's space (e.g. a cross-entropy baseline) on equal
// footing with teacher-student ones.
RetrievalMetrics aligned_retrieval_eval(encoder::SpeechEncoder& encoder, const TeacherEncoder& teacher,
                                        const data::PairedDataset& dataset, double ridge = 1e-2);

}  // namespace s2i::tsl
