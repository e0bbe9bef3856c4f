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

#include "s2i/tsl/losses.hpp"

#include <algorithm>

#include "s2i/core/error.hpp"
#include "s2i/core/log.hpp"

namespace s2i::tsl {

void TslWeights::validate() const {
  if (lambda_norm < 0 || lambda_kdl < 0 || alpha < 0 || beta < 0)
    throw InvalidInput("TSL weights must be non-negative");
  if (m_diff < 0 || m_same < 0) throw InvalidInput("TSL margins must be non-negative");
  if (!(m_same < m_diff)) throw InvalidInput("m_same must be smaller than m_diff");
  if (!use_jel && !use_norm && !use_kdl) throw InvalidInput("at least one TSL term must be enabled");
}

void TslWeights::set_loss_items(const std::vector<std::string>& items) {
  use_jel = use_norm = use_kdl = false;
  for (const auto& item : items) {
    if (item == "jel")
      use_jel = true;
    else if (item == "norm")
      use_norm = true;
    else if (item == "kdl")
      use_kdl = true;
    else
      throw InvalidInput("unknown loss item '" + item + "' (expected norm, jel or kdl)");
  }
}

std::vector<std::string> TslWeights::loss_items() const {
  std::vector<std::string> items;
  if (use_norm) items.push_back("norm");
  if (use_jel) items.push_back("jel");
  if (use_kdl) items.push_back("kdl");
  return items;
}

nlohmann::json TslWeights::to_json() const {
  return {{"lambda_norm", lambda_norm}, {"lambda_kdl", lambda_kdl}, {"m_diff", m_diff},
          {"m_same", m_same},           {"alpha", alpha},           {"beta", beta},
          {"loss_items", loss_items()}};
}

TslWeights TslWeights::from_json(const nlohmann::json& j) {
  TslWeights w;
  w.lambda_norm = j.value("lambda_norm", w.lambda_norm);
  w.lambda_kdl = j.value("lambda_kdl", w.lambda_kdl);
  w.m_diff = j.value("m_diff", w.m_diff);
  w.m_same = j.value("m_same", w.m_same);
  w.alpha = j.value("alpha", w.alpha);
  w.beta = j.value("beta", w.beta);
  if (j.contains("loss_items")) w.set_loss_items(j.at("loss_items").get<std::vector<std::string>>());
  return w;
}

LossBreakdown TslTerms::values() const {
  return {jel.item<double>(), norm.item<double>(), kdl.item<double>(), total.item<double>()};
}

namespace {

void check_pair(const torch::Tensor& f_s, const torch::Tensor& f_v) {
  if (f_s.sizes() != f_v.sizes())
    throw InvalidInput("speech and image embeddings differ in shape");
  if (f_s.dim() < 1 || f_s.dim() > 2) throw InvalidInput("embeddings must be [D] or [B, D]");
}

}  // namespace

torch::Tensor jel_loss(const torch::Tensor& f_s, const torch::Tensor& f_v, const torch::Tensor& labels,
                       const TslWeights& w) {
  check_pair(f_s, f_v);
  if (f_s.dim() != 2) throw InvalidInput("jel_loss expects [B, D] embeddings");
  const auto batch = f_s.size(0);
  if (batch < 2) throw InvalidInput("jel_loss needs a batch of at least two pairs");
  if (labels.dim() != 1 || labels.size(0) != batch) throw InvalidInput("one label per pair is required");

  const auto scores = f_s.matmul(f_v.t());                 // [B, B]
  const auto diff = scores - scores.diagonal().unsqueeze(1);  // s_ij - s_ii
  const auto lab = labels.to(torch::kInt64);
  const auto same_label = lab.unsqueeze(1).eq(lab.unsqueeze(0));
  const auto eye = torch::eye(batch, torch::TensorOptions().dtype(torch::kBool));
  const auto cross = same_label.logical_not().to(f_s.dtype());
  const auto same = same_label.logical_and(eye.logical_not()).to(f_s.dtype());

  const auto n_cross = cross.sum(1);
  const auto n_same = same.sum(1);
  if (n_cross.sum().item<double>() == 0.0)
    warn("jel_loss: batch has no cross-class pair; the m_diff term is zero");

  const auto hinge_diff = (torch::relu(diff + w.m_diff) * cross).sum(1) / n_cross.clamp_min(1.0);
  const auto hinge_same = (torch::relu(diff + w.m_same) * same).sum(1) / n_same.clamp_min(1.0);
  return (w.alpha * hinge_diff + w.beta * hinge_same).mean();
}

torch::Tensor norm_loss(const torch::Tensor& f_s, const torch::Tensor& f_v) {
  check_pair(f_s, f_v);
  return (f_s - f_v).abs().sum(-1);
}

torch::Tensor kdl_loss(const torch::Tensor& f_s, const torch::Tensor& f_v) {
  check_pair(f_s, f_v);
  const auto log_p = torch::log_softmax(f_s, -1);
  const auto log_q = torch::log_softmax(f_v, -1);
  return (log_p.exp() * (log_p - log_q)).sum(-1);
}

TslTerms tsl_loss(const torch::Tensor& f_s, const torch::Tensor& f_v, const torch::Tensor& labels,
                  const TslWeights& w) {
  w.validate();
  TslTerms t;
  t.jel = jel_loss(f_s, f_v, labels, w);
  t.norm = norm_loss(f_s, f_v).mean();
  t.kdl = kdl_loss(f_s, f_v).mean();
  t.total = torch::zeros({}, f_s.options());
  if (w.use_jel) t.total = t.total + t.jel;
  if (w.use_norm) t.total = t.total + w.lambda_norm * t.norm;
  if (w.use_kdl) t.total = t.total + w.lambda_kdl * t.kdl;
  return t;
}

}  // namespace s2i::tsl
