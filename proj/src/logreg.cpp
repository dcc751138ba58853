// Copyright 2026 The forest-embed Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "forest_embed/logreg.hpp"

#include <algorithm>
#include <cmath>

#include "forest_embed/error.hpp"

namespace forest_embed {

namespace {

constexpr double kGradTol = 1e-6;
constexpr int kMaxIterations = 10000;

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double logreg_objective(const Eigen::MatrixXd& features, std::span<const int> labels,
                        double l2, const Eigen::VectorXd& weights, double bias,
                        Eigen::VectorXd* grad_weights, double* grad_bias) {
  const auto n = features.rows();
  const Eigen::VectorXd z = (features * weights).array() + bias;
  double loss = 0;
  Eigen::VectorXd coeff(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = labels[i] == 1 ? 1.0 : -1.0;
    loss += softplus(-y * z(i));
    coeff(i) = -y * sigmoid(-y * z(i)) / static_cast<double>(n);
  }
  loss = loss / static_cast<double>(n) + 0.5 * l2 * weights.squaredNorm();
  if (grad_weights) *grad_weights = features.transpose() * coeff + l2 * weights;
  if (grad_bias) *grad_bias = coeff.sum();
  return loss;
}

LogisticModel train_logreg(const Eigen::MatrixXd& features, std::span<const int> labels,
                           double l2) {
  if (static_cast<std::size_t>(features.rows()) != labels.size() || labels.empty()) {
    throw ValidationError("logistic regression: feature/label count mismatch");
  }
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(labels.size())) {
    throw ValidationError("logistic regression: need examples of both classes");
  }
  if (!(l2 >= 0)) throw ValidationError("logistic regression: l2 must be non-negative");

  LogisticModel model;
  model.weights = Eigen::VectorXd::Zero(features.cols());
  Eigen::VectorXd gw;
  double gb = 0;
  double f = logreg_objective(features, labels, l2, model.weights, model.bias, &gw, &gb);
  double step = 1.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double gmax = std::max(gw.cwiseAbs().maxCoeff(), std::abs(gb));
    if (gmax < kGradTol) break;
    const double gsq = gw.squaredNorm() + gb * gb;
    step = std::min(step * 2.0, 1e6);
    Eigen::VectorXd w_new;
    double b_new = 0, f_new = 0;
    // Armijo backtracking.
    for (;;) {
      w_new = model.weights - step * gw;
      b_new = model.bias - step * gb;
      f_new = logreg_objective(features, labels, l2, w_new, b_new);
      if (f_new <= f - 0.5 * step * gsq || step < 1e-20) break;
      step *= 0.5;
    }
    model.weights = std::move(w_new);
    model.bias = b_new;
    f = logreg_objective(features, labels, l2, model.weights, model.bias, &gw, &gb);
    model.iterations = it + 1;
  }
  return model;
}

double accuracy(const LogisticModel& model, const Eigen::MatrixXd& features,
                std::span<const int> labels) {
  if (labels.empty()) return 0;
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    if (model.predict(features.row(i).transpose()) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

}  // namespace forest_embed
