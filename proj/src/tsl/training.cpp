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

#include "s2i/tsl/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "s2i/core/error.hpp"
#include "s2i/core/log.hpp"
#include "s2i/core/random.hpp"
#include "s2i/nn/checkpoint.hpp"
#include "s2i/nn/tensor.hpp"
#include "s2i/tsl/retrieval.hpp"

namespace s2i::tsl {

std::string to_string(EncoderObjective objective) {
  return objective == EncoderObjective::kClassifier ? "classifier" : "teacher_student";
}

EncoderObjective objective_from_string(const std::string& name) {
  if (name == "teacher_student" || name == "tsl") return EncoderObjective::kTeacherStudent;
  if (name == "classifier" || name == "cross_entropy") return EncoderObjective::kClassifier;
  throw InvalidInput("unknown encoder objective '" + name + "'");
}

namespace {

double grad_norm(const torch::Tensor& term, const torch::Tensor& f_s) {
  if (!term.defined() || !term.requires_grad()) return 0.0;
  auto g = torch::autograd::grad({term}, {f_s}, {}, /*retain_graph=*/true, false, /*allow_unused=*/true);
  return g[0].defined() ? g[0].norm().item<double>() : 0.0;
}

void check_finite(const LossBreakdown& l, int epoch, std::size_t step) {
  if (std::isfinite(l.total)) return;
  std::ostringstream msg;
  msg << "non-finite encoder loss at epoch " << epoch << " step " << step << " (jel " << l.jel << ", norm "
      << l.norm << ", kdl " << l.kdl << ", total " << l.total << ")";
  throw NumericalError(msg.str());
}

}  // namespace

EncoderTrainResult train_speech_encoder(encoder::SpeechEncoder& encoder, const TeacherEncoder& teacher,
                                        const data::PairedDataset& dataset,
                                        const EncoderTrainOptions& options, const EpochCallback& on_epoch) {
  if (!teacher.frozen()) throw PreconditionError("teacher must be trained and frozen first");
  if (options.epochs < 1 || options.batch_size < 2 || !(options.learning_rate > 0))
    throw InvalidInput("epochs >= 1, batch size >= 2 and a positive learning rate are required");
  options.weights.validate();
  const bool tsl = options.objective == EncoderObjective::kTeacherStudent;
  if (tsl && teacher.embedding_dim() != encoder->config().embedding_dim)
    throw InvalidInput("speech and teacher embedding sizes differ");

  const auto& train_classes = dataset.split.train_classes;
  const auto utts = dataset.utterances_in(train_classes);
  if (utts.size() < 2) throw InvalidInput("not enough training utterances");

  EncoderTrainResult result;
  result.teacher_hash_before = nn::parameter_hash(*teacher.net());

  std::vector<const audio::LogMelSpectrogram*> specs;
  std::vector<int> images;
  std::vector<std::int64_t> labels;
  for (int u : utts) {
    const auto& utt = dataset.utterances[u];
    specs.push_back(&utt.spec);
    images.push_back(utt.image);
    const auto it = std::lower_bound(train_classes.begin(), train_classes.end(), utt.label);
    labels.push_back(it - train_classes.begin());
  }
  if (!encoder->frequency_normalization_fitted()) encoder::fit_frequency_normalization(encoder, specs);

  torch::manual_seed(derive_seed(options.seed, {1}));
  const auto dtype = encoder->dtype();
  torch::Tensor targets;  // teacher embeddings per utterance
  if (tsl) targets = teacher.embed(nn::stack_images(dataset.images, images)).to(dtype);

  std::vector<torch::Tensor> params = encoder->parameters();
  torch::nn::Linear head{nullptr};
  if (!tsl) {
    head = torch::nn::Linear(encoder->config().embedding_dim, static_cast<std::int64_t>(train_classes.size()));
    head->to(dtype);
    for (auto& p : head->parameters()) params.push_back(p);
  }
  torch::optim::Adam optim(params, torch::optim::AdamOptions(options.learning_rate));

  std::mt19937_64 rng(derive_seed(options.seed, {2}));
  std::vector<std::size_t> order(utts.size());
  std::iota(order.begin(), order.end(), 0);
  int iteration = 0;

  encoder->train();
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    LossBreakdown sum;
    int batches = 0;
    for (std::size_t start = 0; start + 2 <= order.size(); start += options.batch_size) {
      const auto end = std::min(order.size(), start + options.batch_size);
      std::vector<const audio::LogMelSpectrogram*> batch_specs;
      std::vector<std::int64_t> idx, batch_labels;
      for (auto k = start; k < end; ++k) {
        batch_specs.push_back(specs[order[k]]);
        idx.push_back(static_cast<std::int64_t>(order[k]));
        batch_labels.push_back(labels[order[k]]);
      }
      const auto y = torch::tensor(batch_labels, torch::kInt64);
      auto f_s = encoder::encode_padded(encoder, nn::pad_batch(batch_specs));

      LossBreakdown step;
      torch::Tensor loss;
      if (tsl) {
        const auto f_v = targets.index_select(0, torch::tensor(idx, torch::kInt64));
        const auto terms = tsl_loss(f_s, f_v, y, options.weights);
        loss = terms.total;
        step = terms.values();
        if (iteration == options.balance_iteration && !result.balance) {
          const auto& w = options.weights;
          GradientBalance b;
          b.iteration = iteration;
          if (w.use_jel) b.jel = grad_norm(terms.jel, f_s);
          if (w.use_norm) b.norm = grad_norm(terms.norm * w.lambda_norm, f_s);
          if (w.use_kdl) b.kdl = grad_norm(terms.kdl * w.lambda_kdl, f_s);
          result.balance = b;
        }
      } else {
        loss = torch::nn::functional::cross_entropy(head->forward(f_s), y);
        step.total = loss.item<double>();
      }
      check_finite(step, epoch, start / options.batch_size);

      optim.zero_grad();
      loss.backward();
      optim.step();
      ++iteration;

      sum.jel += step.jel;
      sum.norm += step.norm;
      sum.kdl += step.kdl;
      sum.total += step.total;
      ++batches;
    }
    EpochLog log;
    log.epoch = epoch;
    log.loss = {sum.jel / batches, sum.norm / batches, sum.kdl / batches, sum.total / batches};
    if (options.eval_every > 0 && (epoch % options.eval_every == 0 || epoch == options.epochs)) {
      log.recall_at_1 = retrieval_eval(encoder, teacher, dataset, dataset.split.test_classes).recall_at_1;
      encoder->train();
    }
    result.epochs.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  encoder->eval();

  result.teacher_hash_after = nn::parameter_hash(*teacher.net());
  if (result.teacher_hash_after != result.teacher_hash_before)
    throw PreconditionError("teacher parameters changed during speech-encoder training");
  return result;
}

void write_training_log(const std::string& path, const std::vector<EpochLog>& epochs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write training log " + path);
  out << "epoch,jel,norm,kdl,total,recall@1\n";
  out.precision(10);
  for (const auto& e : epochs) {
    out << e.epoch << ',' << e.loss.jel << ',' << e.loss.norm << ',' << e.loss.kdl << ',' << e.loss.total << ',';
    if (e.recall_at_1) out << *e.recall_at_1;
    out << '\n';
  }
}

}  // namespace s2i::tsl
