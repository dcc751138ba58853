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

#ifndef FOREST_EMBED_EVAL_HPP_
#define FOREST_EMBED_EVAL_HPP_

// Benchmarks over an EmbeddingSet: word similarity (Spearman), analogies by
// vector offset, sentence completion by average similarity, and sentiment by
// logistic regression on averaged word vectors. Evaluation never mutates its
// inputs.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "forest_embed/datasets.hpp"
#include "forest_embed/embeddings.hpp"
#include "forest_embed/error.hpp"

namespace forest_embed {

// Cosine similarity; 0 when either vector is zero.
template <typename A, typename B>
double cosine(const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0 || nv == 0) return 0;
  return std::clamp(static_cast<double>(u.dot(v)) / (nu * nv), -1.0, 1.0);
}

// Ranks starting at 1; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> xs);

// Pearson correlation of average ranks. Throws on length mismatch, fewer than
// two items, or a constant list ("degenerate ranking").
double spearman(std::span<const double> xs, std::span<const double> ys);

struct SimilarityResult {
  double rho = 0;
  std::size_t evaluated = 0;
  std::size_t total = 0;
};

// Pairs with an out-of-vocabulary word are skipped and counted.
SimilarityResult eval_word_similarity(const EmbeddingSet& emb, const SimilarityDataset& dataset);

struct AnalogyOptions {
  // Allow a, b and c themselves as answers.
  bool include_query_words = false;
};

// argmax_w cos(emb[b] - emb[a] + emb[c], emb[w]); ties go to the lower id.
// nullopt when a query word is out of vocabulary.
std::optional<WordId> solve_analogy(const EmbeddingSet& emb, const std::string& a,
                                    const std::string& b, const std::string& c,
                                    const AnalogyOptions& options = {});

struct AccuracyResult {
  double accuracy = 0;
  std::size_t evaluated = 0;
  std::size_t total = 0;
};

struct AnalogyResult {
  AccuracyResult all, syntactic, semantic;
};

// Items with any of the four words out of vocabulary are excluded from the
// denominator. Throws when nothing is evaluable.
AccuracyResult eval_analogies(const EmbeddingSet& emb, const AnalogyDataset& dataset,
                              const AnalogyOptions& options = {});

// Same, also split by syntactic/semantic section. Empty partitions report
// accuracy 0 with evaluated 0.
AnalogyResult eval_analogies_by_kind(const EmbeddingSet& emb, const AnalogyDataset& dataset,
                                     const AnalogyOptions& options = {});

// Index of the candidate with highest mean cosine to the in-vocabulary context
// words, or -1 when every candidate is out of vocabulary.
int choose_completion(const EmbeddingSet& emb, const CompletionItem& item);

// Accuracy over all items; unanswerable items count as wrong.
AccuracyResult eval_sentence_completion(const EmbeddingSet& emb,
                                        const CompletionDataset& dataset);

// Mean of in-vocabulary token vectors; zero when there are none.
Eigen::VectorXd sentence_features(const EmbeddingSet& emb,
                                  std::span<const std::string> tokens);

struct SentimentResult {
  double test_accuracy = 0;
  double chosen_l2 = 0;
  double dev_accuracy = 0;
};

// 10^-3 ... 10^3 by decades.
std::vector<double> default_l2_grid();

// Trains per grid value, keeps the best dev accuracy (ties prefer larger l2),
// reports its test accuracy.
SentimentResult eval_sentiment(const EmbeddingSet& emb, const SentimentDataset& dataset,
                               std::vector<double> l2_grid = default_l2_grid());

}  // namespace forest_embed

#endif  // FOREST_EMBED_EVAL_HPP_
