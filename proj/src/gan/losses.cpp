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

#include "s2i/gan/losses.hpp"

#include "s2i/core/error.hpp"

namespace s2i::gan {

torch::Tensor adversarial_term(const torch::Tensor& logits, bool real, LossForm form) {
  const auto target = real ? torch::ones_like(logits) : torch::zeros_like(logits);
  if (form == LossForm::kLeastSquares) return torch::mse_loss(logits, target);
  return torch::binary_cross_entropy_with_logits(logits, target);
}

DiscriminatorTerms discriminator_terms(const DiscriminatorOutput& real, const DiscriminatorOutput& fake,
                                       const torch::Tensor& wrong_cond_logits, LossForm form) {
  DiscriminatorTerms t;
  t.cond_real = adversarial_term(real.conditional, true, form);
  t.cond_fake = adversarial_term(fake.conditional, false, form);
  t.uncond_real = adversarial_term(real.unconditional, true, form);
  t.uncond_fake = adversarial_term(fake.unconditional, false, form);
  t.wrong = adversarial_term(wrong_cond_logits, false, form);
  t.total = t.cond_real + t.cond_fake + t.uncond_real + t.uncond_fake + t.wrong;
  return t;
}

DiscriminatorTerms discriminator_loss(Discriminator& disc, const torch::Tensor& real, const torch::Tensor& fake,
                                      const torch::Tensor& wrong, const torch::Tensor& c,
                                      const torch::Tensor& labels, const torch::Tensor& wrong_labels,
                                      LossForm form) {
  const auto size = disc->image_size();
  for (const auto* t : {&real, &fake, &wrong})
    if (t->dim() != 4 || t->size(2) != size || t->size(3) != size)
      throw InvalidInput("images do not match the discriminator scale " + std::to_string(size));
  if (labels.numel() != wrong_labels.numel() || labels.numel() != real.size(0))
    throw InvalidInput("one label and one wrong label per sample are required");
  if (labels.eq(wrong_labels).any().item<bool>())
    throw PreconditionError("a wrong pair shares the class of its condition");
  return discriminator_terms(disc->forward(real, c), disc->forward(fake, c), disc->forward(wrong, c).conditional,
                             form);
}

GeneratorTerms generator_loss(std::vector<Discriminator>& discs, const ImagePyramid& fakes, const torch::Tensor& c,
                              LossForm form) {
  if (fakes.scales.empty() || fakes.scales.size() > discs.size())
    throw InvalidInput("pyramid has more scales than discriminators");
  GeneratorTerms g;
  for (std::size_t s = 0; s < fakes.scales.size(); ++s) {
    const auto out = discs[s]->forward(fakes.scales[s], c);
    g.per_scale.push_back(adversarial_term(out.unconditional, true, form) +
                          adversarial_term(out.conditional, true, form));
    g.total = g.total.defined() ? g.total + g.per_scale.back() : g.per_scale.back();
  }
  return g;
}

}  // namespace s2i::gan
