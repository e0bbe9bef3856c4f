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

#include <Eigen/Dense>

namespace s2i::metrics {

struct InceptionScore {
  double mean = 0.0;
  double std = 0.0;
};

// Rows of `probs` are class posteriors p(y|x). The score is computed on
// `splits` contiguous slices and summarised by mean and population std.
InceptionScore inception_score(const Eigen::MatrixXd& probs, int splits = 10);

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  long n = 0;
};

// Sample mean and unbiased covariance of the rows of `features`.
GaussianStats fit_gaussian(const Eigen::MatrixXd& features);

// Frechet distance between two Gaussians, clipped at zero.
double frechet_distance(const GaussianStats& a, const GaussianStats& b);

}  // namespace s2i::metrics
