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

// Acceptance checks. `acceptance --criterion N` runs one check; without
// arguments all nine run in order. Each prints a single PASS/FAIL line and
// the process exits non-zero if any check failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "gradcheck.hpp"
#include "s2i/audio/frontend.hpp"
#include "s2i/audio/wav.hpp"
#include "s2i/core/log.hpp"
#include "s2i/data/synthetic.hpp"
#include "s2i/gan/training.hpp"
#include "s2i/metrics/evaluation.hpp"
#include "s2i/metrics/scores.hpp"
#include "s2i/nn/tensor.hpp"
#include "s2i/pipeline/commands.hpp"
#include "s2i/tsl/losses.hpp"
#include "s2i/tsl/retrieval.hpp"
#include "s2i/tsl/teacher.hpp"
#include "s2i/tsl/training.hpp"

namespace fs = std::filesystem;
using namespace s2i;

namespace {

// Tolerances and budgets.
constexpr double kLossTol = 1e-8;
constexpr double kKdlHandTol = 1e-4;
constexpr double kGradTol = 1e-4;
constexpr double kFidExactTol = 1e-8;
constexpr double kIsExactTol = 1e-6;
constexpr double kFidSymmetryTol = 1e-6;
constexpr double kFidHalvesTol = 0.03;  // Monte-Carlo calibrated
constexpr double kRecallBar = 0.30;
constexpr double kFidImprovement = 0.30;
constexpr double kProbeBar = 2.0 / data::kNumColors;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string num(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

void within_budget(Outcome& o, Clock::time_point start, double budget_s) {
  const double t = seconds_since(start);
  o.require(t < budget_s, "runtime " + num(t, 4) + "s < " + num(budget_s, 5) + "s");
}

// 1: framing arithmetic and spectrogram invariants.
Outcome dsp_exactness() {
  const auto start = Clock::now();
  Outcome o;
  const int sr = audio::kDefaultSampleRate;
  const auto w = audio::samples_for_ms(audio::kWindowMs, sr), h = audio::samples_for_ms(audio::kHopMs, sr);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> len(w, 3 * sr);
  int frame_mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const auto n = len(rng);
    audio::AudioClip clip{std::vector<float>(n, 0.0f), sr};
    std::normal_distribution<float> g;
    for (auto& s : clip.samples) s = g(rng);
    const auto spec = audio::spectrogram(clip);
    const auto expected = 1 + static_cast<int>((n - w) / h);
    if (spec.frames != expected || audio::frame_count(n, w, h) != expected) ++frame_mismatches;
  }
  o.require(frame_mismatches == 0, "frame count matches 1+floor((N-W)/H) for 200 random lengths (" +
                                       std::to_string(frame_mismatches) + " mismatches)");
  audio::AudioClip second{std::vector<float>(sr, 0.0f), sr};
  const auto spec = audio::spectrogram(second);
  o.require(spec.bands == 40 && spec.frames == 98, "1 s at 16 kHz -> " + std::to_string(spec.bands) + "x" +
                                                       std::to_string(spec.frames));
  const float floor_value = static_cast<float>(std::log(audio::kEnergyFloor));
  bool all_floor = true;
  for (float v : spec.values) all_floor = all_floor && v == floor_value;
  o.require(all_floor, "all-zero input gives log(floor) everywhere");
  within_budget(o, start, 10);
  return o;
}

// 2: loss oracles.
Outcome loss_oracles() {
  const auto start = Clock::now();
  Outcome o;
  const auto f64 = torch::kFloat64;
  tsl::TslWeights w;
  w.beta = 0;
  const auto f_v = torch::tensor({1.0, 0.0, 0.0, 1.0}, f64).view({2, 2});
  const auto f_s = torch::tensor({0.9, 0.5, 0.5, 0.9}, f64).view({2, 2});
  const auto y = torch::tensor({0, 1}, torch::kInt64);
  const double jel = tsl::jel_loss(f_s, f_v, y, w).item<double>();
  o.require(std::abs(jel - 0.6) < kLossTol, "jel " + num(jel, 10) + " = 0.6");
  const double norm = tsl::norm_loss(torch::tensor({1.0, 2.0}, f64), torch::tensor({0.0, 4.0}, f64)).item<double>();
  o.require(std::abs(norm - 3.0) < kLossTol, "norm " + num(norm, 10) + " = 3");
  const auto v = torch::tensor({0.2, -1.0, 0.7}, f64);
  const double kdl_same = tsl::kdl_loss(v, v).item<double>();
  o.require(std::abs(kdl_same) < kLossTol, "kdl(f,f) " + num(kdl_same) + " = 0");
  const double kdl = tsl::kdl_loss(torch::tensor({std::log(2.0), 0.0}, f64), torch::tensor({0.0, 0.0}, f64)).item<double>();
  o.require(std::abs(kdl - 0.0566) < kKdlHandTol, "kdl([ln2,0],[0,0]) " + num(kdl, 6) + " = 0.0566");

  torch::manual_seed(2);
  const auto a = torch::randn({8, 6}, f64), b = torch::randn({8, 6}, f64);
  const auto labels = torch::tensor({0, 1, 2, 0, 1, 2, 3, 3}, torch::kInt64);
  const tsl::TslWeights defaults;  // 5, 1000, 1, 0.1
  const auto t = tsl::tsl_loss(a, b, labels, defaults);
  const double composed = tsl::jel_loss(a, b, labels, defaults).item<double>() +
                          5.0 * tsl::norm_loss(a, b).mean().item<double>() +
                          1000.0 * tsl::kdl_loss(a, b).mean().item<double>();
  o.require(std::abs(t.total.item<double>() - composed) < kLossTol,
            "tsl total matches jel + 5 norm + 1000 kdl (|diff| " + num(std::abs(t.total.item<double>() - composed)) + ")");
  within_budget(o, start, 5);
  return o;
}

// 3: finite-difference gradient checks.
Outcome gradient_correctness() {
  const auto start = Clock::now();
  Outcome o;
  {
    torch::manual_seed(17);
    encoder::SpeechEncoderConfig cfg;
    cfg.channels = {4};
    cfg.strides = {64};
    cfg.kernel = 3;
    cfg.hidden = 6;
    cfg.embedding_dim = 5;
    encoder::SpeechEncoder enc(cfg);
    enc->to(torch::kFloat64);
    std::vector<double> mean(cfg.bands, 0.0), sd(cfg.bands, 1.0);
    enc->set_frequency_normalization(mean, sd);
    const auto specs = torch::randn({4, cfg.bands, 200}, torch::kFloat64);
    const std::vector<std::int64_t> lengths = {200, 130, 64, 180};
    const auto f_v = torch::randn({4, cfg.embedding_dim}, torch::kFloat64);
    const auto y = torch::tensor({0, 1, 0, 2}, torch::kInt64);
    const tsl::TslWeights w;
    const auto r = s2i::testing::check_gradients(
        [&] { return tsl::tsl_loss(enc->forward(specs, lengths), f_v, y, w).total; }, enc->parameters());
    o.require(r.max_relative_error < kGradTol, "encoder/TSL max rel err " + num(r.max_relative_error, 3) + " over " +
                                                   std::to_string(r.checked) + " entries");
  }
  for (bool disc : {false, true}) {
    torch::manual_seed(12);
    gan::GanConfig cfg;
    cfg.noise_dim = 4;
    cfg.cond_dim = 5;
    cfg.cond_embed_dim = 3;
    cfg.scales = 2;
    cfg.base_size = 8;
    cfg.gf = 4;
    cfg.df = 4;
    cfg.residual_blocks = 1;
    gan::GanModel m(cfg);
    m->to(torch::kFloat64);
    const int n = 8;
    const auto c = torch::randn({n, 5}, torch::kFloat64);
    const auto z = torch::randn({n, 4}, torch::kFloat64);
    const auto y = torch::arange(n, torch::kInt64);
    const auto yw = y.roll(1, 0);
    std::vector<torch::Tensor> real, fixed;
    for (int s = 0; s < 2; ++s)
      real.push_back(torch::rand({n, 3, cfg.size_at(s), cfg.size_at(s)}, torch::kFloat64) * 2 - 1);
    {
      torch::NoGradGuard g;
      fixed = m->generator->forward(c, z).scales;
    }
    std::vector<torch::Tensor> params;
    std::function<torch::Tensor()> loss;
    if (disc) {
      for (auto& d : m->discriminators)
        for (auto& p : d->parameters()) params.push_back(p);
      loss = [&] {
        auto total = torch::zeros({}, torch::kFloat64);
        for (int s = 0; s < 2; ++s)
          total = total + gan::discriminator_loss(m->discriminators[s], real[s], fixed[s], real[s].roll(1, 0), c, y,
                                                  yw, gan::LossForm::kLogistic)
                              .total;
        return total;
      };
    } else {
      params = m->generator->parameters();
      loss = [&] {
        return gan::generator_loss(m->discriminators, m->generator->forward(c, z), c, gan::LossForm::kLogistic).total;
      };
    }
    const auto r = s2i::testing::check_gradients(loss, params);
    o.require(r.max_relative_error < kGradTol, std::string(disc ? "discriminators" : "generator") +
                                                   "/multi-scale max rel err " + num(r.max_relative_error, 3) +
                                                   " over " + std::to_string(r.checked) + " entries");
  }
  within_budget(o, start, 120);
  return o;
}

// 4: IS / FID oracles.
Outcome metric_oracles() {
  const auto start = Clock::now();
  Outcome o;
  using metrics::GaussianStats;
  const auto i2 = Eigen::MatrixXd::Identity(2, 2);
  const GaussianStats a{Eigen::Vector2d(0, 0), i2, 10}, b{Eigen::Vector2d(3, 4), i2, 10};
  const GaussianStats c4{Eigen::Vector2d(1, 1), 4 * i2, 10}, c1{Eigen::Vector2d(1, 1), i2, 10};
  const double f0 = metrics::frechet_distance(a, a), f25 = metrics::frechet_distance(a, b),
               f2 = metrics::frechet_distance(c4, c1);
  o.require(std::abs(f0) < kFidExactTol && std::abs(f25 - 25) < kFidExactTol && std::abs(f2 - 2) < kFidExactTol,
            "FID closed forms " + num(f0, 3) + ", " + num(f25, 12) + ", " + num(f2, 12));

  Eigen::MatrixXd same(10, 3);
  for (int i = 0; i < 10; ++i) same.row(i) << 0.2, 0.3, 0.5;
  const double is1 = metrics::inception_score(same, 1).mean;
  const double isk = metrics::inception_score(Eigen::MatrixXd::Identity(7, 7), 1).mean;
  o.require(std::abs(is1 - 1) < kIsExactTol && std::abs(isk - 7) < kIsExactTol,
            "IS closed forms " + num(is1, 10) + ", " + num(isk, 10) + " (K=7)");

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(200, 5), y(300, 5);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  for (int i = 0; i < y.size(); ++i) y.data()[i] = 1.3 * g(rng) + 0.2;
  const auto sx = metrics::fit_gaussian(x), sy = metrics::fit_gaussian(y);
  const double asym = std::abs(metrics::frechet_distance(sx, sy) - metrics::frechet_distance(sy, sx));
  o.require(asym < kFidSymmetryTol, "FID asymmetry " + num(asym, 3));

  Eigen::MatrixXd samples(10000, 8);
  for (int i = 0; i < samples.size(); ++i) samples.data()[i] = g(rng);
  const double halves = metrics::frechet_distance(metrics::fit_gaussian(samples.topRows(5000)),
                                                  metrics::fit_gaussian(samples.bottomRows(5000)));
  o.require(halves < kFidHalvesTol, "FID between disjoint 5k halves " + num(halves, 3) + " < " + num(kFidHalvesTol));
  within_budget(o, start, 60);
  return o;
}

data::SyntheticConfig desk_data(std::uint64_t seed) {
  data::SyntheticConfig c;
  c.n_classes = 40;  // 30 train / 10 test
  c.train_fraction = 0.75;
  c.per_class = 60;
  c.seed = seed;
  return c;
}

tsl::TeacherEncoder desk_teacher(const data::PairedDataset& ds, std::uint64_t seed) {
  tsl::TeacherTrainOptions opts;
  opts.train.seed = seed;
  return tsl::train_teacher(ds, opts);
}

encoder::SpeechEncoder desk_encoder(const tsl::TeacherEncoder& teacher, const data::PairedDataset& ds,
                                    std::uint64_t seed, tsl::EncoderObjective objective) {
  torch::manual_seed(seed);
  encoder::SpeechEncoder enc(encoder::SpeechEncoderConfig{});
  tsl::EncoderTrainOptions opts;  // 100 epochs, batch 32, lr 2e-4
  opts.seed = seed;
  opts.objective = objective;
  tsl::train_speech_encoder(enc, teacher, ds, opts);
  return enc;
}

// 5: unseen-class retrieval after teacher-student training.
Outcome zero_shot_transfer() {
  const auto start = Clock::now();
  Outcome o;
  const auto ds = data::make_synthetic(desk_data(101));
  o.require(ds.split.train_classes.size() == 30 && ds.split.test_classes.size() == 10, "30/10 class split");
  const auto teacher = desk_teacher(ds, 102);
  auto enc = desk_encoder(teacher, ds, 103, tsl::EncoderObjective::kTeacherStudent);
  const auto r = tsl::retrieval_eval(enc, teacher, ds, ds.split.test_classes);
  o.require(r.recall_at_1 >= kRecallBar && r.recall_at_1 >= 3 * r.chance_at_1,
            "unseen recall@1 " + num(r.recall_at_1) + " (chance " + num(r.chance_at_1) + ", recall@5 " +
                num(r.recall_at_5) + ")");
  within_budget(o, start, 20 * 60);
  return o;
}

// 6: teacher-student versus cross-entropy training of the same encoder.
Outcome tsl_beats_classifier() {
  const auto start = Clock::now();
  Outcome o;
  double diff_sum = 0;
  std::string rows;
  for (std::uint64_t seed : {201, 202, 203}) {
    const auto ds = data::make_synthetic(desk_data(seed));
    const auto teacher = desk_teacher(ds, seed + 10);
    auto tsl_enc = desk_encoder(teacher, ds, seed + 20, tsl::EncoderObjective::kTeacherStudent);
    auto ce_enc = desk_encoder(teacher, ds, seed + 20, tsl::EncoderObjective::kClassifier);
    const double r_tsl = tsl::aligned_retrieval_eval(tsl_enc, teacher, ds).recall_at_1;
    const double r_ce = tsl::aligned_retrieval_eval(ce_enc, teacher, ds).recall_at_1;
    diff_sum += r_tsl - r_ce;
    rows += (rows.empty() ? "" : ", ") + std::string("seed ") + std::to_string(seed) + " " + num(r_tsl, 3) + " vs " +
            num(r_ce, 3);
  }
  const double mean_diff = diff_sum / 3;
  o.require(mean_diff > 0, "unseen recall@1 TSL vs CE: " + rows + "; mean difference " + num(mean_diff, 3));
  within_budget(o, start, 60 * 60);
  return o;
}

// 7: GAN learns: FID drops and fakes carry the described fill colour.
Outcome gan_learning() {
  const auto start = Clock::now();
  Outcome o;
  const auto ds = data::make_synthetic(desk_data(301));
  const auto teacher = desk_teacher(ds, 302);
  auto enc = desk_encoder(teacher, ds, 303, tsl::EncoderObjective::kTeacherStudent);

  metrics::EvalClassifierOptions eval_opts;
  eval_opts.train.seed = 304;
  auto clf = metrics::train_eval_classifier(ds, eval_opts);
  eval_opts.train.seed = 305;
  auto probe = metrics::train_attribute_probe(ds, eval_opts);
  const auto real = metrics::feature_stats(clf, nn::stack_images(ds.images, ds.images_in(ds.split.test_classes)));

  std::vector<const audio::LogMelSpectrogram*> specs;
  std::vector<int> fills;
  for (int u : ds.utterances_in(ds.split.test_classes)) {
    specs.push_back(&ds.utterances[u].spec);
    fills.push_back(ds.class_spec(ds.utterances[u].label).fill);
  }
  const auto test_c = encoder::encode_all(enc, specs).to(torch::kFloat32);

  gan::GanConfig cfg;  // 3 scales: 16, 32, 64
  torch::manual_seed(306);
  gan::GanModel model(cfg);
  const auto fid_of = [&](gan::GanModel& m) {
    return metrics::evaluate_generation(m->generator, test_c, clf, real, 1000, 307).fid;
  };
  const double fid_init = fid_of(model);
  gan::GanTrainOptions opts;  // 20k iterations
  opts.seed = 308;
  gan::train_gan(model, gan::prepare_gan_data(enc, ds, ds.split.train_classes, cfg), opts);
  const double fid_final = fid_of(model);
  o.require(fid_final <= (1 - kFidImprovement) * fid_init,
            "FID " + num(fid_init) + " -> " + num(fid_final) + " after " + std::to_string(opts.iterations) + " iterations");

  const auto fakes = gan::generate(model->generator, test_c,
                                   gan::sample_noise(static_cast<int>(test_c.size(0)), cfg.noise_dim, 309))
                         .scales.back();
  const double acc = metrics::probe_accuracy(probe, fakes, fills);
  o.require(acc > kProbeBar, "fill-colour probe on fakes " + num(acc) + " > " + num(kProbeBar));
  within_budget(o, start, 2 * 60 * 60);
  return o;
}

// Small end-to-end configuration for the harness checks.
pipeline::RunConfig tiny_run(const fs::path& out, const std::string& name) {
  pipeline::RunConfig c;
  c.name = name;
  c.out = out;
  c.seed = 5;
  c.test_mode = true;
  c.data.synthetic.n_classes = 8;
  c.data.synthetic.per_class = 4;
  c.teacher.train.epochs = 2;
  c.teacher.min_holdout_accuracy = 0.0;
  c.encoder.train.epochs = 2;
  c.encoder.train.batch_size = 8;
  c.gan.net.gf = 8;
  c.gan.net.df = 8;
  c.gan.train.iterations = 10;
  c.gan.train.batch_size = 4;
  c.gan.train.log_every = 5;
  c.metrics.classifier.train.epochs = 1;
  c.metrics.n_samples = 40;
  c.metrics.is_splits = 4;
  c.resolve();
  return c;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 8: ablation tables are complete, aligned and reproducible.
Outcome ablation_fidelity() {
  const auto start = Clock::now();
  Outcome o;
  const auto root = fs::temp_directory_path() / "s2i_acceptance_ablate";
  fs::remove_all(root);
  for (auto axis : {pipeline::AblationAxis::kLossItems, pipeline::AblationAxis::kScales}) {
    const bool loss = axis == pipeline::AblationAxis::kLossItems;
    const std::string tag = loss ? "loss" : "scales";
    std::vector<std::string> csv, md;
    std::vector<pipeline::AblationTable> tables;
    for (int rep = 0; rep < 2; ++rep) {
      const auto cfg = tiny_run(root, "rep" + std::to_string(rep));
      tables.push_back(pipeline::cmd_ablate(cfg, axis));
      csv.push_back(read_file(cfg.run_dir() / ("ablation_" + tag + ".csv")));
      md.push_back(read_file(cfg.run_dir() / ("ablation_" + tag + ".md")));
    }
    const auto& rows = tables[0].rows;
    bool aligned = rows.size() == 3;
    for (const auto& r : rows)
      aligned = aligned && r.seed == rows[0].seed && r.gan_iterations == rows[0].gan_iterations &&
                r.encoder_epochs == rows[0].encoder_epochs;
    std::string labels;
    for (const auto& r : rows) labels += (labels.empty() ? "" : ", ") + r.label;
    o.require(aligned, tag + " plan rows [" + labels + "] share seed and budgets");
    o.require(!csv[0].empty() && csv[0] == csv[1] && md[0] == md[1], tag + " tables bit-identical across two runs");
  }
  fs::remove_all(root);
  return o;
}

// 9: interpolation endpoints reproduce direct generation.
Outcome interpolation_endpoints() {
  const auto start = Clock::now();
  Outcome o;
  const auto root = fs::temp_directory_path() / "s2i_acceptance_interp";
  fs::remove_all(root);
  const auto cfg = tiny_run(root, "interp");
  pipeline::cmd_prepare_data(cfg);
  pipeline::cmd_train_encoder(cfg);
  pipeline::cmd_train_gan(cfg);

  const auto ds = pipeline::load_dataset(cfg);
  const auto& test = ds.split.test_classes;
  const auto utts = ds.utterances_in(test);
  int ua = utts.front(), ub = utts.back();
  const auto clip_a = ds.sample(ua).clip, clip_b = ds.sample(ub).clip;
  const auto strip = pipeline::cmd_interpolate(cfg, clip_a, clip_b);
  o.require(strip.frames.size(0) == 9 && strip.alphas.size() == 9, "strip length " + std::to_string(strip.frames.size(0)));

  const auto ck = nn::load_checkpoint(cfg.run_dir() / "checkpoints" / "gan.ckpt");
  gan::GanModel model(gan::GanConfig::from_json(ck.config));
  nn::restore(*model, ck, "gan");
  const auto direct_a = gan::generate(model->generator, strip.f1, strip.noise, 1).scales.back();
  const auto direct_b = gan::generate(model->generator, strip.f2, strip.noise, 1).scales.back();
  o.require(strip.alphas.back() == 1.0 && torch::equal(strip.frames[8], direct_a[0]),
            "alpha=1 frame identical to generate(f1, z)");
  o.require(strip.alphas.front() == 0.0 && torch::equal(strip.frames[0], direct_b[0]),
            "alpha=0 frame identical to generate(f2, z)");
  o.require(fs::exists(cfg.run_dir() / "samples" / "interpolation.png"), "strip PNG written");
  fs::remove_all(root);
  within_budget(o, start, 60);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  std::string log_path;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--log", log_path, "also append result lines to this file");
  CLI11_PARSE(app, argc, argv);

  torch::set_num_threads(1);
  set_quiet(true);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"DSP exactness", dsp_exactness},
      {"loss unit oracles", loss_oracles},
      {"gradient correctness", gradient_correctness},
      {"metric oracles", metric_oracles},
      {"zero-shot semantic transfer", zero_shot_transfer},
      {"teacher-student beats classifier training", tsl_beats_classifier},
      {"GAN learning", gan_learning},
      {"ablation harness fidelity", ablation_fidelity},
      {"interpolation endpoints", interpolation_endpoints},
  };
  bool all = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    char head[128];
    std::snprintf(head, sizeof head, "criterion %zu %s: ", i + 1, o.pass ? "PASS" : "FAIL");
    const std::string line = head + checks[i].first + " | " + o.detail + "\n";
    std::fputs(line.c_str(), stdout);
    std::fflush(stdout);
    if (!log_path.empty()) std::ofstream(log_path, std::ios::app) << line;
  }
  return all ? 0 : 1;
}
