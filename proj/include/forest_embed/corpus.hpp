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

#ifndef FOREST_EMBED_CORPUS_HPP_
#define FOREST_EMBED_CORPUS_HPP_

// Corpus ingestion: vocabulary, windowed cooccurrence counts and the signed
// PMI word-context matrix.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace forest_embed {

using WordId = std::uint32_t;

// Lowercases ASCII letters when `lowercase` is set; other bytes pass through.
std::string normalize_token(std::string_view token, bool lowercase);

// True iff, after dropping one leading sign and every ',' or '.', the token is
// a non-empty run of digits.
bool is_number_token(std::string_view token);

// Splits a line on whitespace.
std::vector<std::string_view> split_tokens(std::string_view line);

class Vocabulary {
 public:
  static constexpr std::string_view kRareToken = "#rare#";
  static constexpr std::string_view kNumberToken = "#number#";

  Vocabulary() = default;

  // Takes tokens in id order. Both reserved tokens must be present.
  Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> counts,
             bool lowercase = true);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(WordId id) const { return tokens_.at(id); }
  std::uint64_t count(WordId id) const { return counts_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  bool lowercase() const { return lowercase_; }

  WordId rare_id() const { return rare_id_; }
  WordId number_id() const { return number_id_; }

  // Normalizes `surface` and maps numbers to the number token. Returns nullopt
  // when the normalized token is not in the vocabulary.
  std::optional<WordId> find(std::string_view surface) const;

  // Like find(), but out-of-vocabulary tokens resolve to the rare token.
  WordId resolve(std::string_view surface) const;

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, WordId> ids_;
  WordId rare_id_ = 0;
  WordId number_id_ = 0;
  bool lowercase_ = true;
};

// Reads one sentence per line. Tokens seen fewer than `min_count` times are
// folded into the rare token; numbers are folded into the number token. Ids are
// assigned by descending count, ties broken lexicographically.
Vocabulary build_vocabulary(std::istream& corpus, std::uint64_t min_count,
                            bool lowercase = true);

struct PairCount {
  WordId word;
  WordId context;
  std::uint64_t count;
};

struct CooccurrencePairs {
  std::size_t vocab_size = 0;
  std::vector<PairCount> entries;  // sorted by (word, context), unique keys
  std::uint64_t total_pairs = 0;
  std::vector<std::uint64_t> word_marginals;
  std::vector<std::uint64_t> context_marginals;
};

// Aggregates duplicate keys, sorts, and fills totals and marginals.
CooccurrencePairs make_cooccurrence_pairs(std::size_t vocab_size,
                                          std::vector<PairCount> raw);

// Flat (unweighted) symmetric window counts; windows stop at line ends.
CooccurrencePairs count_cooccurrences(std::istream& corpus, const Vocabulary& vocab,
                                      int window);

struct PmiEntry {
  WordId context;
  WordId word;
  double value;
};

// Sparse C x V matrix in coordinate form with row and column indexes.
class PmiMatrix {
 public:
  PmiMatrix() = default;
  PmiMatrix(std::size_t num_contexts, std::size_t num_words,
            std::vector<PmiEntry> entries);

  std::size_t rows() const { return num_contexts_; }
  std::size_t cols() const { return num_words_; }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<PmiEntry>& entries() const { return entries_; }
  const PmiEntry& entry(std::size_t i) const { return entries_[i]; }

  // Indexes into entries() for one context row / word column.
  std::span<const std::size_t> row_entries(WordId context) const;
  std::span<const std::size_t> col_entries(WordId word) const;

 private:
  std::size_t num_contexts_ = 0;
  std::size_t num_words_ = 0;
  std::vector<PmiEntry> entries_;
  std::vector<std::size_t> row_ptr_, row_idx_;
  std::vector<std::size_t> col_ptr_, col_idx_;
};

// log(count * total / (word_marginal * context_marginal)); exact zeros dropped.
PmiMatrix compute_pmi(const CooccurrencePairs& pairs);

// Text formats.
void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in, bool lowercase = true);
void write_cooccurrences(std::ostream& out, const CooccurrencePairs& pairs);
CooccurrencePairs read_cooccurrences(std::istream& in);
void write_pmi(std::ostream& out, const PmiMatrix& pmi);
PmiMatrix read_pmi(std::istream& in);

}  // namespace forest_embed

#endif  // FOREST_EMBED_CORPUS_HPP_
