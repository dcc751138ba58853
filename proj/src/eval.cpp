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

#include "forest_embed/eval.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "forest_embed/logreg.hpp"

namespace forest_embed {

namespace {

using RowMatrix = EmbeddingSet::Matrix;

// Rows scaled to unit length; zero rows stay zero.
RowMatrix normalized_rows(const RowMatrix& m) {
  RowMatrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double n = out.row(i).norm();
    if (n > 0) out.row(i) /= n;
  }
  return out;
}

struct Query {
  WordId a, b, c;
  std::optional<WordId> expected;
};

// Answers a block of queries with one matrix product.
std::vector<WordId> solve_block(const EmbeddingSet& emb, const RowMatrix& unit,
                                std::span<const Query> queries, const AnalogyOptions& options) {
  const auto dims = emb.dims();
  Eigen::MatrixXd targets(dims, static_cast<Eigen::Index>(queries.size()));
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto& qu = queries[q];
    Eigen::VectorXd t =
        (emb.vector(qu.b) - emb.vector(qu.a) + emb.vector(qu.c)).transpose();
    const double n = t.norm();
    if (n > 0) t /= n;
    targets.col(static_cast<Eigen::Index>(q)) = t;
  }
  const Eigen::MatrixXd scores = unit * targets;
  std::vector<WordId> answers(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto& qu = queries[q];
    double best = -std::numeric_limits<double>::infinity();
    WordId best_id = 0;
    for (Eigen::Index w = 0; w < scores.rows(); ++w) {
      const auto id = static_cast<WordId>(w);
      if (!options.include_query_words && (id == qu.a || id == qu.b || id == qu.c)) continue;
      const double s = scores(w, static_cast<Eigen::Index>(q));
      if (s > best) {
        best = s;
        best_id = id;
      }
    }
    answers[q] = best_id;
  }
  return answers;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && xs[order[j]] == xs[order[i]]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean_rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ValidationError("spearman: length mismatch");
  if (xs.size() < 2) throw ValidationError("spearman: need at least 2 items");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const Eigen::Map<const Eigen::VectorXd> x(rx.data(), static_cast<Eigen::Index>(rx.size()));
  const Eigen::Map<const Eigen::VectorXd> y(ry.data(), static_cast<Eigen::Index>(ry.size()));
  const Eigen::VectorXd dx = x.array() - x.mean();
  const Eigen::VectorXd dy = y.array() - y.mean();
  const double sx = dx.norm();
  const double sy = dy.norm();
  if (sx == 0 || sy == 0) throw ValidationError("degenerate ranking");
  return dx.dot(dy) / (sx * sy);
}

SimilarityResult eval_word_similarity(const EmbeddingSet& emb, const SimilarityDataset& dataset) {
  SimilarityResult result;
  result.total = dataset.items.size();
  std::vector<double> model, human;
  for (const auto& item : dataset.items) {
    const auto w1 = emb.find(item.word1);
    const auto w2 = emb.find(item.word2);
    if (!w1 || !w2) continue;
    model.push_back(cosine(emb.vector(*w1), emb.vector(*w2)));
    human.push_back(item.score);
  }
  result.evaluated = model.size();
  if (result.evaluated < 2) {
    throw ValidationError("word similarity '" + dataset.name + "': evaluated " +
                          std::to_string(result.evaluated) + " of " +
                          std::to_string(result.total) + " pairs; need at least 2");
  }
  result.rho = spearman(model, human);
  return result;
}

std::optional<WordId> solve_analogy(const EmbeddingSet& emb, const std::string& a,
                                    const std::string& b, const std::string& c,
                                    const AnalogyOptions& options) {
  const auto ia = emb.find(a), ib = emb.find(b), ic = emb.find(c);
  if (!ia || !ib || !ic) return std::nullopt;
  const RowMatrix unit = normalized_rows(emb.vectors());
  const Query q{*ia, *ib, *ic, std::nullopt};
  return solve_block(emb, unit, std::span(&q, 1), options).front();
}

AnalogyResult eval_analogies_by_kind(const EmbeddingSet& emb, const AnalogyDataset& dataset,
                                     const AnalogyOptions& options) {
  std::vector<Query> queries;
  std::vector<bool> syntactic;
  std::size_t total_syn = 0;
  for (const auto& item : dataset.items) {
    const bool syn = is_syntactic_section(item.section);
    total_syn += syn;
    const auto ia = emb.find(item.a), ib = emb.find(item.b), ic = emb.find(item.c),
               id = emb.find(item.d);
    if (!ia || !ib || !ic || !id) continue;
    queries.push_back({*ia, *ib, *ic, *id});
    syntactic.push_back(syn);
  }

  AnalogyResult result;
  result.all.total = dataset.items.size();
  result.syntactic.total = total_syn;
  result.semantic.total = dataset.items.size() - total_syn;
  if (queries.empty()) {
    throw ValidationError("analogies: no evaluable questions out of " +
                          std::to_string(dataset.items.size()));
  }

  const RowMatrix unit = normalized_rows(emb.vectors());
  constexpr std::size_t kBlock = 256;
  std::size_t correct_syn = 0, correct_sem = 0, eval_syn = 0;
  for (std::size_t start = 0; start < queries.size(); start += kBlock) {
    const auto block = std::span(queries).subspan(start, std::min(kBlock, queries.size() - start));
    const auto answers = solve_block(emb, unit, block, options);
    for (std::size_t k = 0; k < block.size(); ++k) {
      const bool ok = answers[k] == *block[k].expected;
      if (syntactic[start + k]) {
        ++eval_syn;
        correct_syn += ok;
      } else {
        correct_sem += ok;
      }
    }
  }
  result.all.evaluated = queries.size();
  result.all.accuracy = ratio(correct_syn + correct_sem, queries.size());
  result.syntactic.evaluated = eval_syn;
  result.syntactic.accuracy = ratio(correct_syn, eval_syn);
  result.semantic.evaluated = queries.size() - eval_syn;
  result.semantic.accuracy = ratio(correct_sem, queries.size() - eval_syn);
  return result;
}

AccuracyResult eval_analogies(const EmbeddingSet& emb, const AnalogyDataset& dataset,
                              const AnalogyOptions& options) {
  return eval_analogies_by_kind(emb, dataset, options).all;
}

int choose_completion(const EmbeddingSet& emb, const CompletionItem& item) {
  std::vector<WordId> context;
  for (const auto& w : item.context) {
    if (auto id = emb.find(w)) context.push_back(*id);
  }
  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 5; ++k) {
    const auto cand = emb.find(item.candidates[k]);
    if (!cand) continue;
    double score = 0;
    for (WordId w : context) score += cosine(emb.vector(*cand), emb.vector(w));
    if (!context.empty()) score /= static_cast<double>(context.size());
    if (best < 0 || score > best_score) {
      best = k;
      best_score = score;
    }
  }
  return best;
}

AccuracyResult eval_sentence_completion(const EmbeddingSet& emb,
                                        const CompletionDataset& dataset) {
  AccuracyResult result;
  result.total = dataset.items.size();
  if (result.total == 0) throw ValidationError("sentence completion: empty dataset");
  std::size_t correct = 0;
  for (const auto& item : dataset.items) {
    const int choice = choose_completion(emb, item);
    if (choice >= 0) ++result.evaluated;
    if (choice == item.answer) ++correct;
  }
  result.accuracy = ratio(correct, result.total);
  return result;
}

Eigen::VectorXd sentence_features(const EmbeddingSet& emb,
                                  std::span<const std::string> tokens) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(emb.dims());
  std::size_t n = 0;
  for (const auto& tok : tokens) {
    if (auto id = emb.find(tok)) {
      sum += emb.vector(*id).transpose();
      ++n;
    }
  }
  if (n > 0) sum /= static_cast<double>(n);
  return sum;
}

std::vector<double> default_l2_grid() {
  return {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
}

namespace {

void featurize(const EmbeddingSet& emb, const std::vector<SentimentExample>& split,
               Eigen::MatrixXd& features, std::vector<int>& labels) {
  features.resize(static_cast<Eigen::Index>(split.size()), emb.dims());
  labels.resize(split.size());
  for (std::size_t i = 0; i < split.size(); ++i) {
    features.row(static_cast<Eigen::Index>(i)) = sentence_features(emb, split[i].tokens).transpose();
    labels[i] = split[i].label;
  }
}

}  // namespace

SentimentResult eval_sentiment(const EmbeddingSet& emb, const SentimentDataset& dataset,
                               std::vector<double> l2_grid) {
  if (dataset.train.empty() || dataset.dev.empty() || dataset.test.empty()) {
    throw ValidationError("sentiment: train, dev and test splits must be nonempty");
  }
  if (l2_grid.empty()) throw ValidationError("sentiment: empty l2 grid");
  std::sort(l2_grid.begin(), l2_grid.end());

  Eigen::MatrixXd xtr, xdev, xte;
  std::vector<int> ytr, ydev, yte;
  featurize(emb, dataset.train, xtr, ytr);
  featurize(emb, dataset.dev, xdev, ydev);
  featurize(emb, dataset.test, xte, yte);

  SentimentResult result;
  LogisticModel best;
  bool have = false;
  for (double l2 : l2_grid) {
    auto model = train_logreg(xtr, ytr, l2);
    const double dev = accuracy(model, xdev, ydev);
    if (!have || dev >= result.dev_accuracy) {
      result.dev_accuracy = dev;
      result.chosen_l2 = l2;
      best = std::move(model);
      have = true;
    }
  }
  result.test_accuracy = accuracy(best, xte, yte);
  return result;
}

}  // namespace forest_embed
