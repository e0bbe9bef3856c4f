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

namespace s2i::tsl {

// Weights of the teacher-student objective
//   total = jel + lambda_norm * mean(norm) + lambda_kdl * mean(kdl)
// Terms can be switched off for the loss-item ablation; disabled terms are
// still reported but contribute nothing to `total`.
struct TslWeights {
  double lambda_norm = 5.0;
  double lambda_kdl = 1000.0;
  double m_diff = 1.0;
  double m_same = 0.1;
  double alpha = 1.0;
  double beta = 1.0;
  bool use_jel = true;
  bool use_norm = true;
  bool use_kdl = true;

  void validate() const;
  // Enables exactly the listed items ("norm", "jel", "kdl").
  void set_loss_items(const std::vector<std::string>& items);
  std::vector<std::string> loss_items() const;
  nlohmann::json to_json() const;
  static TslWeights from_json(const nlohmann::json& j);
};

struct LossBreakdown {
  double jel = 0.0;
  double norm = 0.0;  // batch mean of the per-pair L1 distance
  double kdl = 0.0;   // batch mean of the per-pair KL divergence
  double total = 0.0;
};

struct TslTerms {
  torch::Tensor jel;
  torch::Tensor norm;
  torch::Tensor kdl;
  torch::Tensor total;

  LossBreakdown values() const;
};

// Joint-embedding hinge loss. For anchor i with score s_ij = f_s_i . f_v_j:
//   alpha * mean_{y_j != y_i} max(0, s_ij - s_ii + m_diff)
// + beta  * mean_{j != i, y_j == y_i} max(0, s_ij - s_ii + m_same)
// averaged over anchors. An empty comparison set contributes zero.
// f_s, f_v: [B, D]; labels: [B] int64.
torch::Tensor jel_loss(const torch::Tensor& f_s, const torch::Tensor& f_v, const torch::Tensor& labels,
                       const TslWeights& w);

// sum_k |f_s_k - f_v_k|, per row for [B, D] input, scalar for [D].
torch::Tensor norm_loss(const torch::Tensor& f_s, const torch::Tensor& f_v);

// KL(softmax(f_s) || softmax(f_v)), natural log; per row or scalar.
torch::Tensor kdl_loss(const torch::Tensor& f_s, const torch::Tensor& f_v);

TslTerms tsl_loss(const torch::Tensor& f_s, const torch::Tensor& f_v, const torch::Tensor& labels,
                  const TslWeights& w);

}  // namespace s2i::tsl
