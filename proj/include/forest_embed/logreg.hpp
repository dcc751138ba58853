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

#ifndef FOREST_EMBED_LOGREG_HPP_
#define FOREST_EMBED_LOGREG_HPP_

// Binary l2-regularized logistic regression trained by full-batch gradient
// descent with backtracking line search.

#include <span>
#include <vector>

#include <Eigen/Core>

namespace forest_embed {

struct LogisticModel {
  Eigen::VectorXd weights;
  double bias = 0;
  int iterations = 0;

  double decision(const Eigen::Ref<const Eigen::VectorXd>& x) const { return weights.dot(x) + bias; }
  int predict(const Eigen::Ref<const Eigen::VectorXd>& x) const { return decision(x) > 0 ? 1 : 0; }
};

// Mean log-loss + l2 * ||w||^2 / 2 (bias unpenalized). Rows of `features` are
// examples; labels are 0/1. Fills the gradient when the outputs are non-null.
double logreg_objective(const Eigen::MatrixXd& features, std::span<const int> labels,
                        double l2, const Eigen::VectorXd& weights, double bias,
                        Eigen::VectorXd* grad_weights = nullptr, double* grad_bias = nullptr);

// Starts from zero; stops when the gradient's max-norm drops below 1e-6 or
// after 10^4 iterations. Throws ValidationError unless both classes occur.
LogisticModel train_logreg(const Eigen::MatrixXd& features, std::span<const int> labels,
                           double l2);

double accuracy(const LogisticModel& model, const Eigen::MatrixXd& features,
                std::span<const int> labels);

}  // namespace forest_embed

#endif  // FOREST_EMBED_LOGREG_HPP_
