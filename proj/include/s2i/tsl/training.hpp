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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "s2i/data/synthetic.hpp"
#include "s2i/encoder/speech_encoder.hpp"
#include "s2i/tsl/losses.hpp"
#include "s2i/tsl/teacher.hpp"

namespace s2i::tsl {

enum class EncoderObjective {
  kTeacherStudent,  // TSL against the frozen teacher
  kClassifier,      // cross-entropy over training classes through a linear head
};

std::string to_string(EncoderObjective objective);
EncoderObjective objective_from_string(const std::string& name);

struct EncoderTrainOptions {
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 2e-4;
  std::uint64_t seed = 0;
  TslWeights weights;
  EncoderObjective objective = EncoderObjective::kTeacherStudent;
  int eval_every = 0;          // epochs between test-class recall@1 probes; 0 disables
  int balance_iteration = 100;  // iteration at which per-term gradient norms are recorded
};

struct EpochLog {
  int epoch = 0;
  LossBreakdown loss;
  std::optional<double> recall_at_1;
};

// Gradient norms of each weighted term of the objective with respect to the
// speech embeddings of a single batch.
struct GradientBalance {
  int iteration = -1;
  double jel = 0.0;
  double norm = 0.0;
  double kdl = 0.0;
};

struct EncoderTrainResult {
  std::vector<EpochLog> epochs;
  std::optional<GradientBalance> balance;
  std::uint64_t teacher_hash_before = 0;
  std::uint64_t teacher_hash_after = 0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

EncoderTrainResult train_speech_encoder(encoder::SpeechEncoder& encoder, const TeacherEncoder& teacher,
                                        const data::PairedDataset& dataset,
                                        const EncoderTrainOptions& options,
                                        const EpochCallback& on_epoch = {});

// Writes `epoch,jel,norm,kdl,total,recall@1`; missing recall values are left empty.
void write_training_log(const std::string& path, const std::vector<EpochLog>& epochs);

}  // namespace s2i::tsl
