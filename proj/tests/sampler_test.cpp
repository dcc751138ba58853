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

#include <cmath>
#include <random>

#include "doctest.h"
#include "forest_embed/sampler.hpp"
#include "synthetic.hpp"

using namespace forest_embed;

TEST_CASE("sampler probabilities follow |value|") {
  const PmiMatrix pmi(2, 2, {{0, 0, 1.0}, {1, 1, -3.0}});
  const auto sampler = build_sampler(pmi);
  const auto p = sampler.implied_probabilities();
  CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(sampler.total_weight() == 4.0);

  const PmiMatrix flat(3, 3, {{0, 0, 2.0}, {1, 2, -2.0}, {2, 1, 2.0}});
  for (double q : build_sampler(flat).implied_probabilities()) {
    CHECK(q == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
  CHECK_THROWS_AS(build_sampler(PmiMatrix(2, 2, {})), ValidationError);
}

TEST_CASE("alias table encodes the exact distribution") {
  const auto pmi = synthetic::random_sparse(4, 40, 40, 0.3);
  const auto sampler = build_sampler(pmi);
  const auto p = sampler.implied_probabilities();
  double total = 0;
  for (const auto& e : pmi.entries()) total += std::abs(e.value);
  for (std::size_t k = 0; k < pmi.nnz(); ++k) {
    CHECK(std::abs(p[k] - std::abs(pmi.entry(k).value) / total) < 1e-12);
  }
}

TEST_CASE("empirical draw frequencies") {
  const PmiMatrix pmi(3, 3, {{0, 0, 0.5}, {1, 1, -2.0}, {2, 2, 1.5}, {0, 2, 1.0}});
  const auto sampler = build_sampler(pmi);
  Rng rng(99);
  constexpr int kDraws = 200000;
  std::vector<int> hits(pmi.nnz(), 0);
  for (int i = 0; i < kDraws; ++i) ++hits[sampler.sample(rng)];
  for (std::size_t k = 0; k < pmi.nnz(); ++k) {
    const double p = std::abs(pmi.entry(k).value) / 5.0;
    const double sigma = std::sqrt(kDraws * p * (1 - p));
    CHECK(std::abs(hits[k] - kDraws * p) <= 3 * sigma);
  }
}

TEST_CASE("sample_batch") {
  Rng rng(1);
  SUBCASE("single entry") {
    const auto pmi = synthetic::random_sparse(2, 10, 10, 0.5);
    const auto sampler = build_sampler(pmi);
    for (int i = 0; i < 100; ++i) CHECK(sample_batch(sampler, pmi, 1, rng).size() == 1);
  }
  SUBCASE("one row conflicts") {
    std::vector<PmiEntry> row;
    for (WordId v = 0; v < 10; ++v) row.push_back({3, v, 1.0 + v});
    const PmiMatrix pmi(5, 10, row);
    const auto sampler = build_sampler(pmi);
    for (int i = 0; i < 50; ++i) CHECK(sample_batch(sampler, pmi, 8, rng).size() == 1);
  }
  SUBCASE("disjoint rows and columns") {
    const auto pmi = synthetic::random_sparse(8, 60, 60, 0.1);
    const auto sampler = build_sampler(pmi);
    for (int i = 0; i < 10000; ++i) {
      const auto mode = i % 2 ? SamplingMode::kWeighted : SamplingMode::kUniformScaled;
      const auto batch = sample_batch(sampler, pmi, i % 3 ? 16 : 100, rng, mode);
      REQUIRE(!batch.empty());
      bool disjoint = true;
      for (std::size_t x = 0; x < batch.size(); ++x) {
        for (std::size_t y = x + 1; y < batch.size(); ++y) {
          disjoint &= pmi.entry(batch[x]).context != pmi.entry(batch[y]).context;
          disjoint &= pmi.entry(batch[x]).word != pmi.entry(batch[y]).word;
        }
      }
      REQUIRE(disjoint);
    }
  }
  SUBCASE("zero batch") {
    const auto pmi = synthetic::random_sparse(2, 4, 4, 0.5);
    CHECK_THROWS_AS(sample_batch(build_sampler(pmi), pmi, 0, rng), ValidationError);
  }
}
