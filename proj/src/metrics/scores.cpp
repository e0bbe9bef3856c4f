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

#include "s2i/metrics/scores.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "s2i/core/error.hpp"

namespace s2i::metrics {

InceptionScore inception_score(const Eigen::MatrixXd& probs, int splits) {
  const auto n = probs.rows();
  if (splits < 1 || n < splits) throw InvalidInput("inception score needs N >= splits >= 1");
  if (probs.cols() < 1) throw InvalidInput("inception score needs at least one class");
  for (Eigen::Index i = 0; i < n; ++i) {
    if ((probs.row(i).array() < 0).any() || !probs.row(i).allFinite() || std::abs(probs.row(i).sum() - 1) > 1e-6)
      throw InvalidInput("row " + std::to_string(i) + " is not a probability vector");
  }
  std::vector<double> scores;
  for (int s = 0; s < splits; ++s) {
    const auto begin = s * n / splits, end = (s + 1) * n / splits;
    const auto part = probs.middleRows(begin, end - begin);
    const Eigen::RowVectorXd marginal = part.colwise().mean();
    double kl = 0.0;
    for (Eigen::Index i = 0; i < part.rows(); ++i)
      for (Eigen::Index k = 0; k < part.cols(); ++k) {
        const double p = part(i, k);
        if (p > 0) kl += p * (std::log(p) - std::log(marginal(k)));
      }
    scores.push_back(std::exp(kl / part.rows()));
  }
  InceptionScore r;
  for (double v : scores) r.mean += v;
  r.mean /= splits;
  for (double v : scores) r.std += (v - r.mean) * (v - r.mean);
  r.std = std::sqrt(r.std / splits);
  return r;
}

GaussianStats fit_gaussian(const Eigen::MatrixXd& features) {
  if (features.rows() < 2) throw InvalidInput("fit_gaussian needs at least two samples");
  if (!features.allFinite()) throw InvalidInput("features contain non-finite values");
  GaussianStats g;
  g.n = features.rows();
  g.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - g.mean.transpose();
  g.covariance = centered.transpose() * centered / static_cast<double>(g.n - 1);
  g.covariance = 0.5 * (g.covariance + g.covariance.transpose());
  return g;
}

namespace {

// Symmetric PSD square root; eigenvalues below zero are clipped.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, double* min_eigenvalue = nullptr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  if (min_eigenvalue) *min_eigenvalue = es.eigenvalues().minCoeff();
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  const auto d = a.mean.size();
  if (b.mean.size() != d || a.covariance.rows() != d || b.covariance.rows() != d)
    throw InvalidInput("Gaussian statistics have different dimensions");

  Eigen::MatrixXd c1 = a.covariance, c2 = b.covariance;
  const auto eye = Eigen::MatrixXd::Identity(d, d);
  const auto min_eig = [](const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  };
  if (min_eig(c1) < 0) c1 += 1e-6 * eye;
  if (min_eig(c2) < 0) c2 += 1e-6 * eye;

  // Tr sqrt(C1 C2) = Tr sqrt(sqrt(C1) C2 sqrt(C1)), whose argument is symmetric.
  const Eigen::MatrixXd r1 = psd_sqrt(c1);
  Eigen::MatrixXd inner = r1 * c2 * r1;
  inner = 0.5 * (inner + inner.transpose());
  double lowest = 0.0;
  const Eigen::MatrixXd cross = psd_sqrt(inner, &lowest);
  // A negative eigenvalue of the inner product would make the true root complex.
  const double imaginary = lowest < 0 ? std::sqrt(-lowest) : 0.0;
  if (imaginary > 1e-3) throw NumericalError("matrix square root has a large imaginary component");

  const double fid = (a.mean - b.mean).squaredNorm() + c1.trace() + c2.trace() - 2.0 * cross.trace();
  return std::max(fid, 0.0);
}

}  // namespace s2i::metrics
