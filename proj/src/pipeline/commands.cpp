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

#include "s2i/pipeline/commands.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <ATen/Context.h>

#include "s2i/audio/wav.hpp"
#include "s2i/core/error.hpp"
#include "s2i/core/log.hpp"
#include "s2i/core/random.hpp"
#include "s2i/data/manifest.hpp"
#include "s2i/metrics/evaluation.hpp"
#include "s2i/nn/checkpoint.hpp"
#include "s2i/nn/tensor.hpp"
#include "s2i/tsl/retrieval.hpp"

namespace s2i::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

void save_encoder(const fs::path& path, const encoder::SpeechEncoder& enc) {
  nn::save_checkpoint(path, nn::snapshot(*enc, "speech_encoder", enc->config().to_json()));
}

encoder::SpeechEncoder load_encoder(const fs::path& path) {
  const auto ck = nn::load_checkpoint(path);
  encoder::SpeechEncoder enc(encoder::SpeechEncoderConfig::from_json(ck.config));
  nn::restore(*enc, ck, "speech_encoder");
  enc->eval();
  for (auto& p : enc->parameters()) p.set_requires_grad(false);
  return enc;
}

gan::GanModel load_gan(const fs::path& path) {
  const auto ck = nn::load_checkpoint(path);
  gan::GanModel model(gan::GanConfig::from_json(ck.config));
  nn::restore(*model, ck, "gan");
  model->eval();
  return model;
}

nn::ImageClassifier load_classifier(const fs::path& path) {
  const auto ck = nn::load_checkpoint(path);
  nn::ImageClassifier net(nn::ImageClassifierConfig::from_json(ck.config));
  nn::restore(*net, ck, "image_classifier");
  net->eval();
  return net;
}

void save_classifier(const fs::path& path, const nn::ImageClassifier& net) {
  nn::save_checkpoint(path, nn::snapshot(*net, "image_classifier", net->config().to_json()));
}

tsl::TeacherEncoder ensure_teacher(const RunPaths& paths, const RunConfig& cfg, const data::PairedDataset& ds,
                                   json* summary) {
  if (fs::exists(paths.teacher())) return tsl::TeacherEncoder::from_checkpoint(nn::load_checkpoint(paths.teacher()));
  tsl::TeacherReport report;
  auto teacher = tsl::train_teacher(ds, cfg.teacher, &report);
  nn::save_checkpoint(paths.teacher(), teacher.checkpoint());
  if (summary)
    (*summary)["teacher"] = {{"train_accuracy", report.classifier.train_accuracy},
                             {"holdout_accuracy", report.classifier.holdout_accuracy},
                             {"below_threshold", report.below_threshold}};
  return teacher;
}

nn::ImageClassifier ensure_eval_classifier(const RunPaths& paths, const RunConfig& cfg,
                                           const data::PairedDataset& ds) {
  if (fs::exists(paths.eval_classifier())) return load_classifier(paths.eval_classifier());
  auto net = metrics::train_eval_classifier(ds, cfg.metrics.classifier);
  save_classifier(paths.eval_classifier(), net);
  return net;
}

nn::ImageClassifier ensure_attribute_probe(const RunPaths& paths, const RunConfig& cfg,
                                           const data::PairedDataset& ds) {
  if (fs::exists(paths.attribute_probe())) return load_classifier(paths.attribute_probe());
  auto opts = cfg.metrics.classifier;
  opts.train.seed = derive_seed(opts.train.seed, {1});
  auto net = metrics::train_attribute_probe(ds, opts);
  save_classifier(paths.attribute_probe(), net);
  return net;
}

struct TestConditions {
  torch::Tensor conditions;
  std::vector<int> labels;
};

TestConditions test_conditions(encoder::SpeechEncoder& enc, const data::PairedDataset& ds) {
  TestConditions t;
  std::vector<const audio::LogMelSpectrogram*> specs;
  for (int u : ds.utterances_in(ds.split.test_classes)) {
    specs.push_back(&ds.utterances[u].spec);
    t.labels.push_back(ds.utterances[u].label);
  }
  if (specs.empty()) throw InvalidInput("the dataset has no test-class utterances");
  t.conditions = encoder::encode_all(enc, specs).to(torch::kFloat32);
  return t;
}

void require(const fs::path& path, const std::string& what) {
  if (!fs::exists(path)) throw PreconditionError(what + " checkpoint " + path.string() + " not found");
}

}  // namespace

RunPaths open_run(const RunConfig& config) {
  RunPaths p{config.run_dir()};
  for (const auto& d : {p.root, p.checkpoints(), p.logs(), p.samples()}) fs::create_directories(d);
  if (config.test_mode) {
    torch::set_num_threads(1);
    at::globalContext().setDeterministicAlgorithms(true, false);
  }
  const auto resolved = config.to_json();
  if (fs::exists(p.lock())) {
    std::ifstream in(p.lock());
    json old;
    try {
      in >> old;
    } catch (const json::exception&) {
      old = json::object();
    }
    for (const char* key : {"seed", "data"})
      if (old.contains(key) && old[key] != resolved[key])
        warn(std::string("config.lock in ") + p.root.string() + " records a different '" + key +
             "'; existing artifacts may be stale");
  }
  write_json(p.lock(), resolved);
  return p;
}

data::PairedDataset load_dataset(const RunConfig& config) {
  data::ManifestOptions mo;
  mo.image_size = config.data.synthetic.image_size;
  mo.sample_rate = config.data.synthetic.speech.sample_rate;
  mo.train_fraction = config.data.synthetic.train_fraction;
  mo.seed = config.data.synthetic.seed;
  fs::path manifest = config.data.manifest;
  if (manifest.empty() && fs::exists(RunPaths{config.run_dir()}.data() / "manifest.csv"))
    manifest = RunPaths{config.run_dir()}.data() / "manifest.csv";
  if (manifest.empty()) return data::make_synthetic(config.data.synthetic);
  auto load = data::load_manifest(manifest, mo);
  for (const auto& e : load.skipped)
    warn("manifest line " + std::to_string(e.line) + " skipped: " + e.message);
  return std::move(load.dataset);
}

json cmd_prepare_data(const RunConfig& config) {
  const auto paths = open_run(config);
  if (!config.data.manifest.empty()) {
    const auto ds = load_dataset(config);
    return {{"manifest", config.data.manifest},
            {"utterances", ds.utterances.size()},
            {"images", ds.images.size()}};
  }
  const auto ds = data::make_synthetic(config.data.synthetic);
  data::write_dataset(paths.data(), ds);
  return {{"dataset", paths.data().string()},
          {"classes", ds.classes.size()},
          {"train_classes", ds.split.train_classes.size()},
          {"test_classes", ds.split.test_classes.size()},
          {"images", ds.images.size()},
          {"utterances", ds.utterances.size()}};
}

json cmd_train_encoder(const RunConfig& config) {
  const auto paths = open_run(config);
  const auto ds = load_dataset(config);
  json summary = json::object();
  auto teacher = ensure_teacher(paths, config, ds, &summary);

  torch::manual_seed(derive_seed(config.encoder.train.seed, {0}));
  encoder::SpeechEncoder enc(config.encoder.net);
  const auto result = tsl::train_speech_encoder(enc, teacher, ds, config.encoder.train, [](const tsl::EpochLog& e) {
    std::ostringstream msg;
    msg << "epoch " << e.epoch << " total " << e.loss.total;
    if (e.recall_at_1) msg << " recall@1 " << *e.recall_at_1;
    info(msg.str());
  });
  save_encoder(paths.encoder(), enc);
  tsl::write_training_log((paths.logs() / "encoder.csv").string(), result.epochs);

  const auto r = tsl::retrieval_eval(enc, teacher, ds, ds.split.test_classes);
  summary["objective"] = tsl::to_string(config.encoder.train.objective);
  summary["loss_items"] = config.encoder.train.weights.loss_items();
  summary["final_loss"] = {{"jel", result.epochs.back().loss.jel},
                           {"norm", result.epochs.back().loss.norm},
                           {"kdl", result.epochs.back().loss.kdl},
                           {"total", result.epochs.back().loss.total}};
  summary["test_retrieval"] = {{"recall@1", r.recall_at_1},
                               {"recall@5", r.recall_at_5},
                               {"chance@1", r.chance_at_1},
                               {"queries", r.queries},
                               {"gallery", r.gallery}};
  summary["teacher_hash_unchanged"] = result.teacher_hash_before == result.teacher_hash_after;
  if (result.balance)
    summary["gradient_balance"] = {{"iteration", result.balance->iteration},
                                   {"jel", result.balance->jel},
                                   {"norm", result.balance->norm},
                                   {"kdl", result.balance->kdl}};
  write_json(paths.logs() / "encoder_report.json", summary);
  return summary;
}

json cmd_train_gan(const RunConfig& config) {
  const RunPaths expected{config.run_dir()};
  require(expected.encoder(), "speech encoder");
  const auto paths = open_run(config);
  const auto ds = load_dataset(config);
  auto enc = load_encoder(paths.encoder());
  auto gan_cfg = config.gan.net;
  gan_cfg.cond_dim = enc->config().embedding_dim;

  const auto data = gan::prepare_gan_data(enc, ds, ds.split.train_classes, gan_cfg);
  torch::manual_seed(derive_seed(config.gan.train.seed, {0}));
  gan::GanModel model(gan_cfg);

  gan::FidProbe probe;
  nn::ImageClassifier clf{nullptr};
  metrics::GaussianStats real;
  torch::Tensor test_c;
  if (config.gan.train.eval_every > 0) {
    clf = ensure_eval_classifier(paths, config, ds);
    real = metrics::feature_stats(clf, nn::stack_images(ds.images, ds.images_in(ds.split.test_classes)));
    test_c = test_conditions(enc, ds).conditions;
    probe = [&](gan::GanModel& m) {
      return metrics::evaluate_generation(m->generator, test_c, clf, real, config.metrics.n_samples,
                                          derive_seed(config.gan.train.seed, {5}), config.metrics.is_splits)
          .fid;
    };
  }
  auto options = config.gan.train;
  options.sample_dir = paths.samples();
  const auto result = gan::train_gan(model, data, options, probe);
  nn::save_checkpoint(paths.gan(), nn::snapshot(*model, "gan", gan_cfg.to_json()));
  gan::write_gan_log((paths.logs() / "gan.csv").string(), result.log);

  const auto& last = result.log.empty() ? gan::GanLogRow{} : result.log.back();
  json summary = {{"iterations", options.iterations},
                  {"scales", gan_cfg.scales},
                  {"final_d_loss", last.d_loss},
                  {"final_g_loss", last.g_loss},
                  {"collapse_warnings", result.collapse_warnings}};
  write_json(paths.logs() / "gan_report.json", summary);
  return summary;
}

json cmd_evaluate(const RunConfig& config) {
  const RunPaths expected{config.run_dir()};
  require(expected.encoder(), "speech encoder");
  require(expected.gan(), "GAN");
  const auto paths = open_run(config);
  const auto ds = load_dataset(config);
  auto enc = load_encoder(paths.encoder());
  auto model = load_gan(paths.gan());
  auto clf = ensure_eval_classifier(paths, config, ds);

  const auto test = test_conditions(enc, ds);
  const auto real = metrics::feature_stats(clf, nn::stack_images(ds.images, ds.images_in(ds.split.test_classes)));
  const auto report = metrics::evaluate_generation(model->generator, test.conditions, clf, real,
                                                   config.metrics.n_samples, derive_seed(config.seed, {20}),
                                                   config.metrics.is_splits);
  json out = report.to_json();
  out["scales"] = model->config().scales;

  if (!ds.classes.empty()) {
    auto probe = ensure_attribute_probe(paths, config, ds);
    const auto z = gan::sample_noise(static_cast<int>(test.labels.size()), model->config().noise_dim,
                                     derive_seed(config.seed, {21}));
    const auto fakes = gan::generate(model->generator, test.conditions, z).scales.back();
    std::vector<int> fills;
    for (int label : test.labels) fills.push_back(ds.class_spec(label).fill);
    out["fill_probe_accuracy"] = metrics::probe_accuracy(probe, fakes, fills);
    out["fill_probe_chance"] = 1.0 / data::kNumColors;
  }

  // one row per test class (up to 8), 8 noise draws per row
  std::vector<std::int64_t> rows;
  std::vector<int> seen;
  for (std::size_t i = 0; i < test.labels.size() && rows.size() < 8; ++i) {
    if (std::find(seen.begin(), seen.end(), test.labels[i]) != seen.end()) continue;
    seen.push_back(test.labels[i]);
    rows.push_back(static_cast<std::int64_t>(i));
  }
  const auto grid = gan::sample_grid(model->generator,
                                     test.conditions.index_select(0, torch::tensor(rows, torch::kInt64)),
                                     gan::sample_noise(8, model->config().noise_dim, derive_seed(config.seed, {22})));
  data::write_png(paths.samples() / "test_grid.png", grid);
  write_json(paths.report(), out);
  return out;
}

Interpolation cmd_interpolate(const RunConfig& config, const audio::AudioClip& clip_a,
                              const audio::AudioClip& clip_b) {
  const RunPaths expected{config.run_dir()};
  require(expected.encoder(), "speech encoder");
  require(expected.gan(), "GAN");
  const auto paths = open_run(config);
  auto enc = load_encoder(paths.encoder());
  auto model = load_gan(paths.gan());

  Interpolation r;
  r.f1 = encoder::encode(enc, audio::spectrogram(clip_a)).unsqueeze(0).to(torch::kFloat32);
  r.f2 = encoder::encode(enc, audio::spectrogram(clip_b)).unsqueeze(0).to(torch::kFloat32);
  r.noise = gan::sample_noise(1, model->config().noise_dim, derive_seed(config.seed, {23}));
  std::vector<torch::Tensor> frames;
  std::vector<data::Image> tiles;
  for (int k = 0; k < kInterpolationFrames; ++k) {
    const double alpha = static_cast<double>(k) / (kInterpolationFrames - 1);
    r.alphas.push_back(alpha);
    const auto c = alpha * r.f1 + (1.0 - alpha) * r.f2;
    frames.push_back(gan::generate(model->generator, c, r.noise, 1).scales.back());
    tiles.push_back(nn::to_image(frames.back()[0]));
  }
  r.frames = torch::cat(frames, 0);
  data::write_png(paths.samples() / "interpolation.png", data::tile(tiles, kInterpolationFrames));
  return r;
}

Interpolation cmd_interpolate(const RunConfig& config, const fs::path& wav_a, const fs::path& wav_b) {
  const int rate = config.data.synthetic.speech.sample_rate;
  return cmd_interpolate(config, audio::read_wav(wav_a, rate), audio::read_wav(wav_b, rate));
}

AblationAxis ablation_axis_from_string(const std::string& name) {
  if (name == "loss" || name == "loss_items") return AblationAxis::kLossItems;
  if (name == "scales" || name == "scale") return AblationAxis::kScales;
  throw InvalidInput("unknown ablation plan '" + name + "' (expected loss or scales)");
}

namespace {

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const char* axis_name(AblationAxis axis) { return axis == AblationAxis::kScales ? "scales" : "loss"; }

void copy_if_present(const fs::path& from, const fs::path& to) {
  if (!fs::exists(from)) return;
  fs::create_directories(to.parent_path());
  fs::copy_file(from, to, fs::copy_options::overwrite_existing);
}

}  // namespace

std::string AblationTable::csv() const {
  std::string s = "label,is_mean,is_std,fid,seed,encoder_epochs,gan_iterations\n";
  for (const auto& r : rows)
    s += r.label + ',' + fmt(r.is_mean, 6) + ',' + fmt(r.is_std, 6) + ',' + fmt(r.fid, 6) + ',' +
         std::to_string(r.seed) + ',' + std::to_string(r.encoder_epochs) + ',' + std::to_string(r.gan_iterations) +
         '\n';
  return s;
}

std::string AblationTable::markdown() const {
  std::string s = axis == AblationAxis::kScales ? "| Generator scales | IS | FID |\n|---|---|---|\n"
                                                : "| Loss items | IS | FID |\n|---|---|---|\n";
  for (const auto& r : rows) s += "| " + r.label + " | " + fmt(r.is_mean, 2) + " ± " + fmt(r.is_std, 2) + " | " + fmt(r.fid, 2) + " |\n";
  if (!rows.empty())
    s += "\nAll rows: seed " + std::to_string(rows.front().seed) + ", " + std::to_string(rows.front().encoder_epochs) +
         " encoder epochs, " + std::to_string(rows.front().gan_iterations) + " GAN iterations.\n";
  return s;
}

AblationTable cmd_ablate(const RunConfig& config, AblationAxis axis) {
  const auto base = open_run(config);
  const auto ds = load_dataset(config);
  ensure_teacher(base, config, ds, nullptr);
  ensure_eval_classifier(base, config, ds);

  AblationTable table;
  table.axis = axis;
  std::vector<std::pair<std::string, RunConfig>> rows;
  const auto sub = [&](const std::string& label) {
    RunConfig c = config;
    c.name = (fs::path(config.name) / (std::string("ablate_") + axis_name(axis)) / label).string();
    return c;
  };
  if (axis == AblationAxis::kLossItems) {
    const std::vector<std::vector<std::string>> plans = {{"norm"}, {"norm", "jel"}, {"norm", "jel", "kdl"}};
    for (const auto& items : plans) {
      std::string label;
      for (const auto& i : items) label += (label.empty() ? "" : "+") + i;
      auto c = sub(label);
      c.encoder.train.weights.set_loss_items(items);
      rows.emplace_back(label, c);
    }
  } else {
    if (!fs::exists(base.encoder())) cmd_train_encoder(config);
    for (int s = 1; s <= 3; ++s) {
      auto c = sub(std::to_string(s) + "_scale" + (s > 1 ? "s" : ""));
      c.gan.net.scales = s;
      rows.emplace_back(std::to_string(config.gan.net.size_at(s - 1)) + "x" + std::to_string(config.gan.net.size_at(s - 1)), c);
    }
  }

  for (auto& [label, c] : rows) {
    const RunPaths p{c.run_dir()};
    fs::create_directories(p.checkpoints());
    copy_if_present(base.teacher(), p.teacher());
    copy_if_present(base.eval_classifier(), p.eval_classifier());
    if (fs::exists(base.data() / "manifest.csv")) c.data.manifest = (base.data() / "manifest.csv").string();
    if (axis == AblationAxis::kScales) copy_if_present(base.encoder(), p.encoder());
    else cmd_train_encoder(c);
    cmd_train_gan(c);
    const auto report = cmd_evaluate(c);
    table.rows.push_back({label, report.at("is_mean").get<double>(), report.at("is_std").get<double>(),
                          report.at("fid").get<double>(), c.seed, c.encoder.train.epochs, c.gan.train.iterations});
  }
  write_text(base.root / (std::string("ablation_") + axis_name(axis) + ".csv"), table.csv());
  write_text(base.root / (std::string("ablation_") + axis_name(axis) + ".md"), table.markdown());
  return table;
}

}  // namespace s2i::pipeline
