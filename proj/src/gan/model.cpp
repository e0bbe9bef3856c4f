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

#include "s2i/gan/model.hpp"

#include <algorithm>

#include "s2i/core/error.hpp"

namespace s2i::gan {

std::string to_string(LossForm form) { return form == LossForm::kLeastSquares ? "least_squares" : "logistic"; }

LossForm loss_form_from_string(const std::string& name) {
  if (name == "logistic" || name == "bce") return LossForm::kLogistic;
  if (name == "least_squares" || name == "lsgan") return LossForm::kLeastSquares;
  throw InvalidInput("unknown GAN loss form '" + name + "'");
}

void GanConfig::validate() const {
  if (scales < 1 || scales > 3) throw InvalidInput("GAN scales must be between 1 and 3");
  if (base_size < 8 || (base_size & (base_size - 1)) != 0)
    throw InvalidInput("GAN base size must be a power of two >= 8");
  if (noise_dim < 1 || cond_dim < 1 || cond_embed_dim < 1 || gf < 1 || df < 1 || residual_blocks < 0)
    throw InvalidInput("GAN sizes must be positive");
}

nlohmann::json GanConfig::to_json() const {
  return {{"noise_dim", noise_dim},
          {"cond_dim", cond_dim},
          {"cond_embed_dim", cond_embed_dim},
          {"scales", scales},
          {"base_size", base_size},
          {"gf", gf},
          {"df", df},
          {"residual_blocks", residual_blocks},
          {"loss", to_string(loss)},
          {"conditioning_augmentation", conditioning_augmentation}};
}

GanConfig GanConfig::from_json(const nlohmann::json& j) {
  GanConfig c;
  c.noise_dim = j.value("noise_dim", c.noise_dim);
  c.cond_dim = j.value("cond_dim", c.cond_dim);
  c.cond_embed_dim = j.value("cond_embed_dim", c.cond_embed_dim);
  c.scales = j.value("scales", c.scales);
  c.base_size = j.value("base_size", c.base_size);
  c.gf = j.value("gf", c.gf);
  c.df = j.value("df", c.df);
  c.residual_blocks = j.value("residual_blocks", c.residual_blocks);
  c.loss = loss_form_from_string(j.value("loss", to_string(c.loss)));
  c.conditioning_augmentation = j.value("conditioning_augmentation", c.conditioning_augmentation);
  c.validate();
  return c;
}

namespace {

namespace F = torch::nn;

torch::nn::Conv2d conv3(int in, int out) {
  return F::Conv2d(F::Conv2dOptions(in, out, 3).padding(1).bias(false));
}

// Nearest upsampling, then conv + BN + GLU halving 2*out channels to out.
torch::nn::Sequential up_block(int in, int out) {
  return F::Sequential(F::Upsample(F::UpsampleOptions().scale_factor(std::vector<double>{2, 2}).mode(torch::kNearest)),
                       conv3(in, out * 2), F::BatchNorm2d(out * 2), F::GLU(F::GLUOptions(1)));
}

torch::nn::Sequential glu_block(int in, int out) {
  return F::Sequential(conv3(in, out * 2), F::BatchNorm2d(out * 2), F::GLU(F::GLUOptions(1)));
}

torch::nn::Sequential residual_block(int ch) {
  return F::Sequential(conv3(ch, ch * 2), F::BatchNorm2d(ch * 2), F::GLU(F::GLUOptions(1)), conv3(ch, ch),
                       F::BatchNorm2d(ch));
}

int log2i(int v) {
  int r = 0;
  while ((1 << r) < v) ++r;
  return r;
}

torch::Tensor broadcast(const torch::Tensor& c, std::int64_t h, std::int64_t w) {
  return c.view({c.size(0), c.size(1), 1, 1}).expand({c.size(0), c.size(1), h, w});
}

}  // namespace

GeneratorImpl::GeneratorImpl(GanConfig config) : config_(std::move(config)) {
  config_.validate();
  const int ce = config_.cond_embed_dim;
  cond_ = register_module("cond", F::Linear(config_.cond_dim, (config_.conditioning_augmentation ? 4 : 2) * ce));

  const int ups = log2i(config_.base_size / 4);
  int ch = config_.gf << ups;
  fc_ = register_module("fc", F::Linear(F::LinearOptions(config_.noise_dim + ce, ch * 16 * 2).bias(false)));
  fc_norm_ = register_module("fc_norm", F::BatchNorm1d(ch * 16 * 2));
  for (int i = 0; i < ups; ++i) {
    stem_.push_back(register_module("stem" + std::to_string(i), up_block(ch, ch / 2)));
    ch /= 2;
  }
  to_rgb_.push_back(register_module("rgb0", F::Conv2d(F::Conv2dOptions(ch, 3, 3).padding(1))));
  for (int s = 1; s < config_.scales; ++s) {
    const auto tag = std::to_string(s);
    joints_.push_back(register_module("joint" + tag, glu_block(ch + ce, ch)));
    for (int r = 0; r < config_.residual_blocks; ++r)
      residual_.push_back(register_module("res" + tag + "_" + std::to_string(r), residual_block(ch)));
    const int next = std::max(ch / 2, 8);
    ups_.push_back(register_module("up" + tag, up_block(ch, next)));
    ch = next;
    to_rgb_.push_back(register_module("rgb" + tag, F::Conv2d(F::Conv2dOptions(ch, 3, 3).padding(1))));
  }
}

std::pair<torch::Tensor, torch::Tensor> GeneratorImpl::embed_condition(const torch::Tensor& c) {
  if (c.dim() != 2 || c.size(1) != config_.cond_dim)
    throw InvalidInput("generator condition must be [B, " + std::to_string(config_.cond_dim) + "]");
  auto h = torch::glu(cond_->forward(c), 1);
  if (!config_.conditioning_augmentation) return {h, {}};
  const int ce = config_.cond_embed_dim;
  return {h.narrow(1, 0, ce), h.narrow(1, ce, ce)};
}

torch::Tensor GeneratorImpl::augmentation_kl(const torch::Tensor& c) {
  if (!config_.conditioning_augmentation) return torch::zeros({}, c.options());
  auto [mu, logvar] = embed_condition(c);
  return (0.5 * (mu.pow(2) + logvar.exp() - 1 - logvar)).sum(1).mean();
}

ImagePyramid GeneratorImpl::forward(const torch::Tensor& c, const torch::Tensor& z) {
  if (z.dim() != 2 || z.size(1) != config_.noise_dim || z.size(0) != c.size(0))
    throw InvalidInput("generator noise must be [B, " + std::to_string(config_.noise_dim) + "]");
  auto [mu, logvar] = embed_condition(c);
  auto code = mu;
  if (logvar.defined() && is_training()) code = mu + (0.5 * logvar).exp() * torch::randn_like(mu);

  auto h = fc_norm_->forward(fc_->forward(torch::cat({code, z}, 1)));
  h = torch::glu(h, 1).view({c.size(0), -1, 4, 4});
  for (auto& blk : stem_) h = blk->forward(h);

  ImagePyramid out;
  out.scales.push_back(torch::tanh(to_rgb_[0]->forward(h)));
  std::size_t r = 0;
  for (std::size_t s = 0; s < joints_.size(); ++s) {
    h = joints_[s]->forward(torch::cat({h, broadcast(code, h.size(2), h.size(3))}, 1));
    for (int k = 0; k < config_.residual_blocks; ++k, ++r) h = h + residual_[r]->forward(h);
    h = ups_[s]->forward(h);
    out.scales.push_back(torch::tanh(to_rgb_[s + 1]->forward(h)));
  }
  return out;
}

DiscriminatorImpl::DiscriminatorImpl(const GanConfig& config, int scale) : size_(config.size_at(scale)) {
  const int downs = log2i(size_ / 4);
  trunk_ = F::Sequential();
  int ch = config.df;
  trunk_->push_back(F::Conv2d(F::Conv2dOptions(3, ch, 4).stride(2).padding(1)));
  trunk_->push_back(F::SiLU());
  for (int i = 1; i < downs; ++i) {
    const int next = std::min(ch * 2, config.df * 8);
    trunk_->push_back(F::Conv2d(F::Conv2dOptions(ch, next, 4).stride(2).padding(1).bias(false)));
    trunk_->push_back(F::BatchNorm2d(next));
    trunk_->push_back(F::SiLU());
    ch = next;
  }
  register_module("trunk", trunk_);
  uncond_ = register_module("uncond", F::Conv2d(F::Conv2dOptions(ch, 1, 4)));
  cond_ = register_module(
      "cond", F::Sequential(conv3(ch + config.cond_dim, ch), F::BatchNorm2d(ch),
                            F::SiLU(), F::Conv2d(F::Conv2dOptions(ch, 1, 4))));
}

DiscriminatorOutput DiscriminatorImpl::forward(const torch::Tensor& images, const torch::Tensor& c) {
  if (images.dim() != 4 || images.size(1) != 3 || images.size(2) != size_ || images.size(3) != size_)
    throw InvalidInput("discriminator expects [B, 3, " + std::to_string(size_) + ", " + std::to_string(size_) +
                       "] images");
  auto code = trunk_->forward(images);
  DiscriminatorOutput out;
  out.unconditional = uncond_->forward(code).view({-1});
  if (c.defined()) {
    if (c.dim() != 2 || c.size(0) != images.size(0)) throw InvalidInput("one condition per image is required");
    out.conditional = cond_->forward(torch::cat({code, broadcast(c, code.size(2), code.size(3))}, 1)).view({-1});
  }
  return out;
}

GanModelImpl::GanModelImpl(GanConfig config) : config_(std::move(config)) {
  config_.validate();
  generator = register_module("generator", Generator(config_));
  for (int s = 0; s < config_.scales; ++s)
    discriminators.push_back(register_module("disc" + std::to_string(s), Discriminator(config_, s)));
}

}  // namespace s2i::gan
