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

#include "s2i/pipeline/config.hpp"

#include <fstream>

#include "s2i/core/error.hpp"
#include "s2i/core/random.hpp"

namespace s2i::pipeline {

namespace {

using nlohmann::json;

json synthetic_json(const data::SyntheticConfig& c) {
  return {{"n_classes", c.n_classes},
          {"train_fraction", c.train_fraction},
          {"per_class", c.per_class},
          {"descriptions_per_image", c.descriptions_per_image},
          {"image_size", c.image_size},
          {"speech",
           {{"sample_rate", c.speech.sample_rate},
            {"duration_jitter", c.speech.duration_jitter},
            {"amplitude_jitter", c.speech.amplitude_jitter},
            {"noise_level", c.speech.noise_level},
            {"gap_s", c.speech.gap_s}}}};
}

data::SyntheticConfig synthetic_from(const json& j) {
  data::SyntheticConfig c;
  c.n_classes = j.value("n_classes", c.n_classes);
  c.train_fraction = j.value("train_fraction", c.train_fraction);
  c.per_class = j.value("per_class", c.per_class);
  c.descriptions_per_image = j.value("descriptions_per_image", c.descriptions_per_image);
  c.image_size = j.value("image_size", c.image_size);
  if (j.contains("speech")) {
    const auto& s = j["speech"];
    c.speech.sample_rate = s.value("sample_rate", c.speech.sample_rate);
    c.speech.duration_jitter = s.value("duration_jitter", c.speech.duration_jitter);
    c.speech.amplitude_jitter = s.value("amplitude_jitter", c.speech.amplitude_jitter);
    c.speech.noise_level = s.value("noise_level", c.speech.noise_level);
    c.speech.gap_s = s.value("gap_s", c.speech.gap_s);
  }
  return c;
}

json classifier_train_json(const nn::ClassifierTrainOptions& o) {
  return {{"epochs", o.epochs},
          {"batch_size", o.batch_size},
          {"learning_rate", o.learning_rate},
          {"holdout_fraction", o.holdout_fraction}};
}

nn::ClassifierTrainOptions classifier_train_from(const json& j, nn::ClassifierTrainOptions o) {
  o.epochs = j.value("epochs", o.epochs);
  o.batch_size = j.value("batch_size", o.batch_size);
  o.learning_rate = j.value("learning_rate", o.learning_rate);
  o.holdout_fraction = j.value("holdout_fraction", o.holdout_fraction);
  return o;
}

}  // namespace

void RunConfig::resolve() {
  data.synthetic.seed = derive_seed(seed, {10});
  teacher.train.seed = derive_seed(seed, {11});
  encoder.train.seed = derive_seed(seed, {12});
  metrics.classifier.train.seed = derive_seed(seed, {13});
  gan.train.seed = derive_seed(seed, {14});
  gan.net.cond_dim = encoder.net.embedding_dim;
  teacher.net.feature_dim = encoder.net.embedding_dim;
  encoder.net.bands = audio::kMelBands;
  encoder.net.validate();
  encoder.train.weights.validate();
  gan.net.validate();
}

json RunConfig::to_json() const {
  const auto& et = encoder.train;
  const auto& gt = gan.train;
  return {
      {"name", name},
      {"out", out.string()},
      {"seed", seed},
      {"test_mode", test_mode},
      {"data", {{"synthetic", synthetic_json(data.synthetic)}, {"manifest", data.manifest}}},
      {"teacher",
       {{"net", teacher.net.to_json()},
        {"train", classifier_train_json(teacher.train)},
        {"min_holdout_accuracy", teacher.min_holdout_accuracy}}},
      {"encoder",
       {{"net", encoder.net.to_json()},
        {"train",
         {{"epochs", et.epochs},
          {"batch_size", et.batch_size},
          {"learning_rate", et.learning_rate},
          {"objective", tsl::to_string(et.objective)},
          {"eval_every", et.eval_every},
          {"balance_iteration", et.balance_iteration},
          {"weights", et.weights.to_json()}}}}},
      {"gan",
       {{"net", gan.net.to_json()},
        {"train",
         {{"iterations", gt.iterations},
          {"batch_size", gt.batch_size},
          {"learning_rate_g", gt.learning_rate_g},
          {"learning_rate_d", gt.learning_rate_d},
          {"beta1", gt.beta1},
          {"beta2", gt.beta2},
          {"log_every", gt.log_every},
          {"eval_every", gt.eval_every},
          {"sample_every", gt.sample_every},
          {"collapse_threshold", gt.collapse_threshold},
          {"augmentation_kl_weight", gt.augmentation_kl_weight}}}}},
      {"metrics",
       {{"classifier", {{"net", metrics.classifier.net.to_json()}, {"train", classifier_train_json(metrics.classifier.train)}}},
        {"n_samples", metrics.n_samples},
        {"is_splits", metrics.is_splits}}},
  };
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.name = j.value("name", c.name);
  c.out = j.value("out", c.out.string());
  c.seed = j.value("seed", c.seed);
  c.test_mode = j.value("test_mode", c.test_mode);
  const json empty = json::object();
  const auto section = [&](const json& parent, const char* key) -> const json& {
    return parent.contains(key) ? parent.at(key) : empty;
  };

  const auto& d = section(j, "data");
  c.data.synthetic = synthetic_from(section(d, "synthetic"));
  c.data.manifest = d.value("manifest", c.data.manifest);

  const auto& t = section(j, "teacher");
  if (t.contains("net")) c.teacher.net = nn::ImageClassifierConfig::from_json(t["net"]);
  c.teacher.train = classifier_train_from(section(t, "train"), c.teacher.train);
  c.teacher.min_holdout_accuracy = t.value("min_holdout_accuracy", c.teacher.min_holdout_accuracy);

  const auto& e = section(j, "encoder");
  if (e.contains("net")) c.encoder.net = encoder::SpeechEncoderConfig::from_json(e["net"]);
  const auto& et = section(e, "train");
  auto& eo = c.encoder.train;
  eo.epochs = et.value("epochs", eo.epochs);
  eo.batch_size = et.value("batch_size", eo.batch_size);
  eo.learning_rate = et.value("learning_rate", eo.learning_rate);
  eo.objective = tsl::objective_from_string(et.value("objective", tsl::to_string(eo.objective)));
  eo.eval_every = et.value("eval_every", eo.eval_every);
  eo.balance_iteration = et.value("balance_iteration", eo.balance_iteration);
  if (et.contains("weights")) eo.weights = tsl::TslWeights::from_json(et["weights"]);

  const auto& g = section(j, "gan");
  if (g.contains("net")) c.gan.net = gan::GanConfig::from_json(g["net"]);
  const auto& gt = section(g, "train");
  auto& go = c.gan.train;
  go.iterations = gt.value("iterations", go.iterations);
  go.batch_size = gt.value("batch_size", go.batch_size);
  go.learning_rate_g = gt.value("learning_rate_g", go.learning_rate_g);
  go.learning_rate_d = gt.value("learning_rate_d", go.learning_rate_d);
  go.beta1 = gt.value("beta1", go.beta1);
  go.beta2 = gt.value("beta2", go.beta2);
  go.log_every = gt.value("log_every", go.log_every);
  go.eval_every = gt.value("eval_every", go.eval_every);
  go.sample_every = gt.value("sample_every", go.sample_every);
  go.collapse_threshold = gt.value("collapse_threshold", go.collapse_threshold);
  go.augmentation_kl_weight = gt.value("augmentation_kl_weight", go.augmentation_kl_weight);

  const auto& m = section(j, "metrics");
  const auto& mc = section(m, "classifier");
  if (mc.contains("net")) c.metrics.classifier.net = nn::ImageClassifierConfig::from_json(mc["net"]);
  c.metrics.classifier.train = classifier_train_from(section(mc, "train"), c.metrics.classifier.train);
  c.metrics.n_samples = m.value("n_samples", c.metrics.n_samples);
  c.metrics.is_splits = m.value("is_splits", c.metrics.is_splits);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return RunConfig::from_json(j);
}

}  // namespace s2i::pipeline
