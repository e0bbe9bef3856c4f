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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

namespace s2i::gan {

enum class LossForm { kLogistic, kLeastSquares };

std::string to_string(LossForm form);
LossForm loss_form_from_string(const std::string& name);

struct GanConfig {
  int noise_dim = 64;
  int cond_dim = 128;        // speech embedding size
  int cond_embed_dim = 32;   // condition after the input projection
  int scales = 3;            // 1..3, resolutions base, 2*base, 4*base
  int base_size = 16;
  int gf = 32;               // generator channels at the first output scale
  int df = 16;               // discriminator channels after the first conv
  int residual_blocks = 2;
  LossForm loss = LossForm::kLogistic;
  bool conditioning_augmentation = false;

  void validate() const;
  int size_at(int scale) const { return base_size << scale; }
  nlohmann::json to_json() const;
  static GanConfig from_json(const nlohmann::json& j);
};

// One image per scale, coarsest first; each [B, 3, s, s] in [-1, 1].
struct ImagePyramid {
  std::vector<torch::Tensor> scales;
};

class GeneratorImpl : public torch::nn::Module {
 public:
  explicit GeneratorImpl(GanConfig config);

  // Condition embedding (mean and log-variance when augmentation is on).
  std::pair<torch::Tensor, torch::Tensor> embed_condition(const torch::Tensor& c);

  ImagePyramid forward(const torch::Tensor& c, const torch::Tensor& z);

  // Penalty for conditioning augmentation, zero when it is off.
  torch::Tensor augmentation_kl(const torch::Tensor& c);

  const GanConfig& config() const { return config_; }

 private:
  GanConfig config_;
  torch::nn::Linear cond_{nullptr};
  torch::nn::Linear fc_{nullptr};
  torch::nn::BatchNorm1d fc_norm_{nullptr};
  std::vector<torch::nn::Sequential> stem_;      // 4x4 -> base_size upsampling
  std::vector<torch::nn::Sequential> joints_;    // per refinement stage
  std::vector<torch::nn::Sequential> residual_;  // flattened, residual_blocks per stage
  std::vector<torch::nn::Sequential> ups_;
  std::vector<torch::nn::Conv2d> to_rgb_;
};
TORCH_MODULE(Generator);

struct DiscriminatorOutput {
  torch::Tensor unconditional;  // [B] logits
  torch::Tensor conditional;    // [B] logits, undefined when no condition was given
};

class DiscriminatorImpl : public torch::nn::Module {
 public:
  DiscriminatorImpl(const GanConfig& config, int scale);

  DiscriminatorOutput forward(const torch::Tensor& images, const torch::Tensor& c = {});
  int image_size() const { return size_; }

 private:
  int size_;
  torch::nn::Sequential trunk_{nullptr};
  torch::nn::Conv2d uncond_{nullptr};
  torch::nn::Sequential cond_{nullptr};
};
TORCH_MODULE(Discriminator);

// Generator plus one discriminator per scale, checkpointed together.
class GanModelImpl : public torch::nn::Module {
 public:
  explicit GanModelImpl(GanConfig config);

  Generator generator{nullptr};
  std::vector<Discriminator> discriminators;

  const GanConfig& config() const { return config_; }

 private:
  GanConfig config_;
};
TORCH_MODULE(GanModel);

}  // namespace s2i::gan
