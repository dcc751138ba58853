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
#include "forest_embed/prox.hpp"
#include "oracles.hpp"

using namespace forest_embed;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("group_threshold") {
  const std::vector<NodeId> g = {0, 1};
  auto out = group_threshold(vec({3, 4}), g, 1.0);
  CHECK(out(0) == doctest::Approx(2.4));
  CHECK(out(1) == doctest::Approx(3.2));
  out = group_threshold(vec({0.3, 0.4}), g, 1.0);
  CHECK(out(0) == 0.0);
  CHECK(out(1) == 0.0);
  CHECK(group_threshold(vec({3, 4}), g, 0.0) == vec({3, 4}));
  // Outside the group nothing moves.
  const std::vector<NodeId> g1 = {1};
  CHECK(group_threshold(vec({3, 4, 5}), g1, 1.0) == vec({3, 3, 5}));
  CHECK_THROWS_AS(group_threshold(vec({1}), std::vector<NodeId>{}, 1.0), ValidationError);
  CHECK_THROWS_AS(group_threshold(vec({1}), std::vector<NodeId>{3}, 1.0), ValidationError);
}

TEST_CASE("forest_prox on a chain") {
  const ProxPlan plan(parse_forest("-1 0"));
  const auto out = forest_prox(plan, vec({3, 4}), 1.0);
  // Frozen from tests/oracles/prox_chain_oracle.py (conic solver agrees to 1e-6).
  CHECK(out(0) == doctest::Approx(2.2928932188134525).epsilon(1e-12));
  CHECK(out(1) == doctest::Approx(2.2928932188134525).epsilon(1e-12));
  const auto dual = oracle::dual_prox({-1, 0}, vec({3, 4}), 1.0);
  CHECK((out - dual).lpNorm<Eigen::Infinity>() < 1e-9);

  // Ancestors-first composition gives a different (wrong) answer here.
  Eigen::VectorXd wrong = vec({3, 4});
  group_threshold_inplace(wrong, plan.group(0), 1.0);
  group_threshold_inplace(wrong, plan.group(1), 1.0);
  CHECK((wrong - out).lpNorm<Eigen::Infinity>() > 1e-3);
}

TEST_CASE("forest_prox edge cases") {
  const ProxPlan plan(build_default_forest(1));
  CHECK(forest_prox(plan, Eigen::VectorXd::Zero(13), 5.0) == Eigen::VectorXd::Zero(13));
  const ProxPlan flat(build_flat_forest(2));
  CHECK(forest_prox(flat, vec({3, -0.5}), 1.0) == vec({2, 0}));
  CHECK_THROWS_AS(forest_prox(flat, vec({1, 2, 3}), 1.0), ValidationError);
  CHECK_THROWS_AS(forest_prox(flat, vec({1, 2}), -1.0), ValidationError);
}

TEST_CASE("prox plan order and groups") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto parents = oracle::random_parents(1 + trial % 15, rng);
    const ProxPlan plan{Forest(parents)};
    const auto groups = oracle::groups_from_parents(parents);
    std::vector<int> position(parents.size());
    for (std::size_t k = 0; k < plan.order().size(); ++k) position[plan.order()[k]] = static_cast<int>(k);
    for (NodeId n = 0; n < plan.size(); ++n) {
      auto g = plan.group(n);
      CHECK(g.front() == n);
      std::vector<int> sorted(g.begin(), g.end());
      std::sort(sorted.begin(), sorted.end());
      auto expect = groups[n];
      std::sort(expect.begin(), expect.end());
      CHECK(sorted == expect);
      for (std::size_t k = 1; k < g.size(); ++k) CHECK(position[g[k]] < position[n]);
    }
  }
}

TEST_CASE("l1_prox") {
  CHECK(l1_prox(vec({3, -0.5}), 1.0) == vec({2, 0}));
  CHECK(l1_prox(vec({3, -0.5}), 0.0) == vec({3, -0.5}));
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  const ProxPlan flat(build_flat_forest(17));
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd a(17);
    for (int i = 0; i < 17; ++i) a(i) = normal(rng);
    const double t = std::abs(normal(rng));
    // Bitwise, not approximately.
    CHECK(l1_prox(a, t) == forest_prox(flat, a, t));
  }
}

TEST_CASE("forest_prox properties on random instances") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 13;
    const auto parents = oracle::random_parents(m, rng);
    const ProxPlan plan{Forest(parents)};
    Eigen::VectorXd a(m), b(m);
    for (int i = 0; i < m; ++i) {
      a(i) = 2 * normal(rng);
      b(i) = 2 * normal(rng);
    }
    const double t = 2 * unit(rng);
    const auto pa = forest_prox(plan, a, t);
    const auto pb = forest_prox(plan, b, t);
    CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);

    // No random perturbation improves the objective.
    const double best = oracle::prox_objective(parents, a, pa, t);
    for (int k = 0; k < 200; ++k) {
      Eigen::VectorXd u = pa;
      const double scale = std::pow(10.0, -1 - 4 * unit(rng));
      for (int i = 0; i < m; ++i) u(i) += scale * normal(rng);
      CHECK(oracle::prox_objective(parents, a, u, t) >= best - 1e-12);
    }
  }
}
