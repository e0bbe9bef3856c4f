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

#include <vector>

#include <torch/torch.h>

#include "s2i/gan/model.hpp"

namespace s2i::gan {

struct DiscriminatorTerms {
  torch::Tensor cond_real;
  torch::Tensor cond_fake;
  torch::Tensor uncond_real;
  torch::Tensor uncond_fake;
  torch::Tensor wrong;
  torch::Tensor total;
};

// Batch mean of the loss pushing `logits` toward real (1) or fake (0).
torch::Tensor adversarial_term(const torch::Tensor& logits, bool real, LossForm form);

DiscriminatorTerms discriminator_terms(const DiscriminatorOutput& real, const DiscriminatorOutput& fake,
                                       const torch::Tensor& wrong_cond_logits, LossForm form);

// Scores real, fake and wrong images at one scale. `wrong_labels[i]` must
// differ from `labels[i]`.
DiscriminatorTerms discriminator_loss(Discriminator& disc, const torch::Tensor& real, const torch::Tensor& fake,
                                      const torch::Tensor& wrong, const torch::Tensor& c,
                                      const torch::Tensor& labels, const torch::Tensor& wrong_labels,
                                      LossForm form);

struct GeneratorTerms {
  std::vector<torch::Tensor> per_scale;  // uncond + cond at each scale
  torch::Tensor total;
};

// Non-saturating generator objective summed over the scales of `fakes`.
GeneratorTerms generator_loss(std::vector<Discriminator>& discs, const ImagePyramid& fakes, const torch::Tensor& c,
                              LossForm form);

}  // namespace s2i::gan
