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

#include "s2i/gan/training.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "s2i/core/error.hpp"
#include "s2i/core/log.hpp"
#include "s2i/core/random.hpp"
#include "s2i/nn/tensor.hpp"

namespace s2i::gan {

ImagePyramid real_pyramid(std::span<const data::Image> images, std::span<const int> indices,
                          const GanConfig& config) {
  const auto full = nn::stack_images(images, indices);
  ImagePyramid p;
  for (int s = 0; s < config.scales; ++s) {
    const int size = config.size_at(s);
    if (size > full.size(2)) throw InvalidInput("images are smaller than the finest GAN scale");
    p.scales.push_back(size == full.size(2) ? full : nn::downsample(full, size));
  }
  return p;
}

GanTrainData prepare_gan_data(encoder::SpeechEncoder& encoder, const data::PairedDataset& dataset,
                              std::span<const int> classes, const GanConfig& config) {
  const auto utts = dataset.utterances_in(classes);
  if (utts.empty()) throw InvalidInput("no utterances for GAN training");
  if (encoder->config().embedding_dim != config.cond_dim)
    throw InvalidInput("speech embedding size does not match the GAN condition size");
  GanTrainData d;
  std::vector<const audio::LogMelSpectrogram*> specs;
  std::vector<int> images;
  std::vector<int> row_of(dataset.images.size(), -1);
  for (int u : utts) {
    const auto& utt = dataset.utterances[u];
    specs.push_back(&utt.spec);
    d.labels.push_back(utt.label);
    if (row_of[utt.image] < 0) {
      row_of[utt.image] = static_cast<int>(images.size());
      images.push_back(utt.image);
    }
    d.image_of.push_back(row_of[utt.image]);
  }
  d.conditions = encoder::encode_all(encoder, specs).to(torch::kFloat32);
  d.real = real_pyramid(dataset.images, images, config);
  return d;
}

torch::Tensor sample_noise(int count, int noise_dim, std::uint64_t seed) {
  auto gen = torch::make_generator<torch::CPUGeneratorImpl>(seed);
  return torch::randn({count, noise_dim}, gen, torch::kFloat32);
}

namespace {

struct Batch {
  std::vector<std::int64_t> rows;
  std::vector<std::int64_t> images;
  std::vector<std::int64_t> wrong_images;
  std::vector<std::int64_t> labels;
  std::vector<std::int64_t> wrong_labels;
};

// Uniform rows; each anchor's wrong image comes from an in-batch sample of
// another class. Batches without such a sample for every anchor are redrawn.
Batch draw_batch(const GanTrainData& data, int size, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, data.labels.size() - 1);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Batch b;
    for (int i = 0; i < size; ++i) {
      const auto r = pick(rng);
      b.rows.push_back(static_cast<std::int64_t>(r));
      b.images.push_back(data.image_of[r]);
      b.labels.push_back(data.labels[r]);
    }
    bool ok = true;
    for (int i = 0; i < size && ok; ++i) {
      std::vector<int> others;
      for (int j = 0; j < size; ++j)
        if (b.labels[j] != b.labels[i]) others.push_back(j);
      if (others.empty()) {
        ok = false;
        break;
      }
      const int j = others[std::uniform_int_distribution<std::size_t>(0, others.size() - 1)(rng)];
      b.wrong_images.push_back(b.images[j]);
      b.wrong_labels.push_back(b.labels[j]);
    }
    if (ok) return b;
  }
  throw InvalidInput("GAN training data needs at least two classes");
}

torch::Tensor rows_of(const torch::Tensor& t, const std::vector<std::int64_t>& idx) {
  return t.index_select(0, torch::tensor(idx, torch::kInt64));
}

}  // namespace

GanTrainResult train_gan(GanModel& model, const GanTrainData& data, const GanTrainOptions& options,
                         const FidProbe& fid_probe) {
  const auto& cfg = model->config();
  if (options.iterations < 0 || options.batch_size < 2 || options.log_every < 1)
    throw InvalidInput("GAN iterations >= 0, batch size >= 2 and log interval >= 1 are required");
  if (data.real.scales.size() != static_cast<std::size_t>(cfg.scales))
    throw InvalidInput("real pyramid does not match the configured scales");
  if (data.conditions.size(1) != cfg.cond_dim) throw InvalidInput("condition size mismatch");

  torch::manual_seed(derive_seed(options.seed, {1}));
  std::mt19937_64 rng(derive_seed(options.seed, {2}));
  auto& gen = model->generator;
  std::vector<torch::Tensor> d_params;
  for (auto& d : model->discriminators)
    for (auto& p : d->parameters()) d_params.push_back(p);
  const auto adam = [&](double lr) {
    return torch::optim::AdamOptions(lr).betas({options.beta1, options.beta2});
  };
  torch::optim::Adam opt_g(gen->parameters(), adam(options.learning_rate_g));
  torch::optim::Adam opt_d(d_params, adam(options.learning_rate_d));

  // fixed grid inputs: first condition of up to 4 classes x 6 noise draws
  torch::Tensor grid_c, grid_z;
  if (options.sample_every > 0) {
    std::vector<std::int64_t> rows;
    std::vector<int> seen;
    for (std::size_t i = 0; i < data.labels.size() && rows.size() < 4; ++i) {
      if (std::find(seen.begin(), seen.end(), data.labels[i]) != seen.end()) continue;
      seen.push_back(data.labels[i]);
      rows.push_back(static_cast<std::int64_t>(i));
    }
    grid_c = rows_of(data.conditions, rows);
    grid_z = sample_noise(6, cfg.noise_dim, derive_seed(options.seed, {3}));
    std::filesystem::create_directories(options.sample_dir);
  }

  GanTrainResult result;
  double d_sum = 0.0, g_sum = 0.0;
  int window = 0;
  bool collapse_flagged = false;
  model->train();
  for (int it = 1; it <= options.iterations; ++it) {
    const auto b = draw_batch(data, options.batch_size, rng);
    const auto c = rows_of(data.conditions, b.rows);
    const auto y = torch::tensor(b.labels, torch::kInt64);
    const auto y_wrong = torch::tensor(b.wrong_labels, torch::kInt64);
    const auto z = torch::randn({options.batch_size, cfg.noise_dim});
    const auto fakes = gen->forward(c, z);

    torch::Tensor d_loss;
    for (int s = 0; s < cfg.scales; ++s) {
      auto terms = discriminator_loss(model->discriminators[s], rows_of(data.real.scales[s], b.images),
                                      fakes.scales[s].detach(), rows_of(data.real.scales[s], b.wrong_images), c, y,
                                      y_wrong, cfg.loss);
      d_loss = d_loss.defined() ? d_loss + terms.total : terms.total;
    }
    opt_d.zero_grad();
    d_loss.backward();
    opt_d.step();

    auto g_loss = generator_loss(model->discriminators, fakes, c, cfg.loss).total;
    if (cfg.conditioning_augmentation) g_loss = g_loss + options.augmentation_kl_weight * gen->augmentation_kl(c);
    opt_g.zero_grad();
    g_loss.backward();
    opt_g.step();

    const double dv = d_loss.item<double>(), gv = g_loss.item<double>();
    if (!std::isfinite(dv) || !std::isfinite(gv)) {
      std::ostringstream msg;
      msg << "non-finite GAN loss at iteration " << it << " (d " << dv << ", g " << gv << ")";
      throw NumericalError(msg.str());
    }
    d_sum += dv;
    g_sum += gv;
    ++window;

    const double spread = fakes.scales.back().detach().var(0).mean().item<double>();
    if (spread < options.collapse_threshold && !collapse_flagged) {
      std::ostringstream msg;
      msg << "possible mode collapse at iteration " << it << ": fake pixel variance " << spread;
      warn(msg.str());
      ++result.collapse_warnings;
      collapse_flagged = true;
    } else if (spread >= options.collapse_threshold) {
      collapse_flagged = false;
    }

    const bool probe = options.eval_every > 0 && fid_probe && it % options.eval_every == 0;
    if (it % options.log_every == 0 || probe || it == options.iterations) {
      GanLogRow row{it, d_sum / window, g_sum / window, std::nullopt};
      if (probe) {
        row.fid = fid_probe(model);
        model->train();
      }
      result.log.push_back(row);
      d_sum = g_sum = 0.0;
      window = 0;
    }
    if (options.sample_every > 0 && it % options.sample_every == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "iter_%06d.png", it);
      data::write_png(options.sample_dir / name, sample_grid(gen, grid_c, grid_z));
      model->train();
    }
  }
  model->eval();
  return result;
}

void write_gan_log(const std::string& path, const std::vector<GanLogRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write GAN log " + path);
  out << "iter,d_loss,g_loss,fid\n";
  out.precision(10);
  for (const auto& r : rows) {
    out << r.iteration << ',' << r.d_loss << ',' << r.g_loss << ',';
    if (r.fid) out << *r.fid;
    out << '\n';
  }
}

ImagePyramid generate(Generator& generator, const torch::Tensor& c, const torch::Tensor& z, int chunk) {
  if (c.size(0) != z.size(0)) throw InvalidInput("one noise vector per condition is required");
  if (chunk < 1) throw InvalidInput("chunk must be positive");
  torch::NoGradGuard no_grad;
  const bool was_training = generator->is_training();
  generator->eval();
  std::vector<std::vector<torch::Tensor>> parts;
  for (std::int64_t s = 0; s < c.size(0); s += chunk) {
    const auto n = std::min<std::int64_t>(chunk, c.size(0) - s);
    auto p = generator->forward(c.narrow(0, s, n).to(torch::kFloat32), z.narrow(0, s, n));
    if (parts.empty()) parts.resize(p.scales.size());
    for (std::size_t k = 0; k < p.scales.size(); ++k) parts[k].push_back(p.scales[k]);
  }
  generator->train(was_training);
  ImagePyramid out;
  for (auto& scale : parts) out.scales.push_back(torch::cat(scale, 0));
  return out;
}

ImagePyramid infer(const audio::AudioClip& clip, encoder::SpeechEncoder& encoder, Generator& generator,
                   const torch::Tensor& z) {
  const auto spec = audio::spectrogram(clip);
  const auto c = encoder::encode(encoder, spec).unsqueeze(0);
  const auto zz = z.dim() == 1 ? z.unsqueeze(0) : z;
  return generate(generator, c.expand({zz.size(0), c.size(1)}), zz, 1);
}

data::Image sample_grid(Generator& generator, const torch::Tensor& conditions, const torch::Tensor& noise) {
  const auto rows = conditions.size(0), cols = noise.size(0);
  auto c = conditions.repeat_interleave(cols, 0);
  auto z = noise.repeat({rows, 1});
  const auto fine = generate(generator, c, z).scales.back();
  std::vector<data::Image> tiles;
  for (std::int64_t i = 0; i < fine.size(0); ++i) tiles.push_back(nn::to_image(fine[i]));
  return data::tile(tiles, static_cast<int>(cols));
}

}  // namespace s2i::gan
