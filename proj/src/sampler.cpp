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

#include "forest_embed/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "forest_embed/error.hpp"

namespace forest_embed {

EntrySampler::EntrySampler(const PmiMatrix& pmi) {
  const std::size_t n = pmi.nnz();
  if (n == 0) throw ValidationError("sampler: pmi matrix has no entries");

  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) total_weight_ += std::abs(pmi.entry(i).value);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = std::abs(pmi.entry(i).value) * static_cast<double>(n) / total_weight_;
  }

  prob_.assign(n, 1.0);
  alias_.resize(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    alias_[i] = i;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers differ from 1 only by rounding.
  for (std::size_t i : small) prob_[i] = 1.0;
  for (std::size_t i : large) prob_[i] = 1.0;
}

std::size_t EntrySampler::sample(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> column(0, prob_.size() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t i = column(rng);
  return coin(rng) < prob_[i] ? i : alias_[i];
}

std::size_t EntrySampler::sample_uniform(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, prob_.size() - 1);
  return pick(rng);
}

std::vector<double> EntrySampler::implied_probabilities() const {
  const std::size_t n = prob_.size();
  std::vector<double> p(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] += prob_[i] / static_cast<double>(n);
    if (alias_[i] != i) p[alias_[i]] += (1.0 - prob_[i]) / static_cast<double>(n);
  }
  return p;
}

EntrySampler build_sampler(const PmiMatrix& pmi) { return EntrySampler(pmi); }

std::vector<std::size_t> sample_batch(const EntrySampler& sampler, const PmiMatrix& pmi,
                                      std::size_t batch_size, Rng& rng, SamplingMode mode) {
  if (batch_size == 0) throw ValidationError("sample_batch: batch_size must be >= 1");
  std::vector<std::size_t> batch;
  batch.reserve(batch_size);
  // Batches are tens of entries in practice; linear scans beat hashing there.
  const bool hashed = batch_size > 64;
  std::vector<WordId> rows, cols;
  std::unordered_set<WordId> row_set, col_set;
  auto taken = [&](WordId c, WordId v) {
    if (hashed) return row_set.contains(c) || col_set.contains(v);
    return std::find(rows.begin(), rows.end(), c) != rows.end() ||
           std::find(cols.begin(), cols.end(), v) != cols.end();
  };
  const std::size_t budget = 10 * batch_size;
  for (std::size_t draw = 0; draw < budget && batch.size() < batch_size; ++draw) {
    const std::size_t k =
        mode == SamplingMode::kWeighted ? sampler.sample(rng) : sampler.sample_uniform(rng);
    const auto& e = pmi.entry(k);
    if (taken(e.context, e.word)) continue;
    if (hashed) {
      row_set.insert(e.context);
      col_set.insert(e.word);
    } else {
      rows.push_back(e.context);
      cols.push_back(e.word);
    }
    batch.push_back(k);
  }
  return batch;
}

}  // namespace forest_embed
