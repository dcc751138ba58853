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

#ifndef FOREST_EMBED_SAMPLER_HPP_
#define FOREST_EMBED_SAMPLER_HPP_

// Entry sampling over the nonzeros of a PMI matrix.

#include <cstddef>
#include <random>
#include <vector>

#include "forest_embed/corpus.hpp"

namespace forest_embed {

using Rng = std::mt19937_64;

enum class SamplingMode {
  kWeighted,       // P(entry) proportional to |value|
  kUniformScaled,  // uniform draw; caller rescales the gradient
};

// Walker/Vose alias table over |value| of every stored entry. O(1) draws.
class EntrySampler {
 public:
  EntrySampler() = default;
  explicit EntrySampler(const PmiMatrix& pmi);

  std::size_t size() const { return prob_.size(); }
  double total_weight() const { return total_weight_; }

  std::size_t sample(Rng& rng) const;
  std::size_t sample_uniform(Rng& rng) const;

  // Draw probability of every entry as encoded by the table.
  std::vector<double> implied_probabilities() const;

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
  double total_weight_ = 0;
};

EntrySampler build_sampler(const PmiMatrix& pmi);

// Draws entries until `batch_size` are accepted or 10 * batch_size draws are
// spent. Draws sharing a row or a column with an accepted entry are rejected,
// so the returned entries touch pairwise-distinct d_c rows and a_v columns.
std::vector<std::size_t> sample_batch(const EntrySampler& sampler, const PmiMatrix& pmi,
                                      std::size_t batch_size, Rng& rng,
                                      SamplingMode mode = SamplingMode::kWeighted);

}  // namespace forest_embed

#endif  // FOREST_EMBED_SAMPLER_HPP_
