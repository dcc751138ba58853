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

#include <random>

#include "doctest.h"
#include "forest_embed/error.hpp"
#include "forest_embed/logreg.hpp"

using namespace forest_embed;

TEST_CASE("logreg gradient matches finite differences") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(30, 4);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  std::vector<int> y(30);
  for (int i = 0; i < 30; ++i) y[i] = i % 3 == 0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd w(4);
    for (int j = 0; j < 4; ++j) w(j) = normal(rng);
    const double b = normal(rng), l2 = 0.3;
    Eigen::VectorXd gw;
    double gb = 0;
    logreg_objective(x, y, l2, w, b, &gw, &gb);
    const double h = 1e-6;
    for (int j = 0; j < 4; ++j) {
      Eigen::VectorXd wp = w, wm = w;
      wp(j) += h;
      wm(j) -= h;
      const double fd = (logreg_objective(x, y, l2, wp, b) - logreg_objective(x, y, l2, wm, b)) / (2 * h);
      CHECK(std::abs(fd - gw(j)) <= 1e-6 * std::max(1.0, std::abs(gw(j))));
    }
    const double fdb = (logreg_objective(x, y, l2, w, b + h) - logreg_objective(x, y, l2, w, b - h)) / (2 * h);
    CHECK(std::abs(fdb - gb) <= 1e-6 * std::max(1.0, std::abs(gb)));
  }
}

TEST_CASE("logreg fits separable data") {
  Eigen::MatrixXd x(2, 1);
  x << 1, -1;
  const std::vector<int> y{1, 0};
  const auto model = train_logreg(x, y, 1e-3);
  CHECK(accuracy(model, x, y) == 1.0);
  CHECK(model.weights(0) > 0);
}

TEST_CASE("strong penalty predicts the majority class") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(40, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  std::vector<int> y(40);
  for (int i = 0; i < 40; ++i) y[i] = i % 4 != 0;
  const auto model = train_logreg(x, y, 1e6);
  CHECK(model.weights.norm() < 1e-4);
  CHECK(model.bias > 0);
  for (int i = 0; i < 40; ++i) CHECK(model.predict(x.row(i).transpose()) == 1);
}

TEST_CASE("logreg is deterministic and validates labels") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 2, -1, 0.5, 0.3, -2, 2, 1;
  const std::vector<int> y{1, 0, 0, 1};
  const auto a = train_logreg(x, y, 0.1);
  const auto b = train_logreg(x, y, 0.1);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
  const std::vector<int> single{1, 1, 1, 1};
  CHECK_THROWS_AS(train_logreg(x, single, 0.1), ValidationError);
}
