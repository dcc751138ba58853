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

#ifndef FOREST_EMBED_EMBEDDINGS_HPP_
#define FOREST_EMBED_EMBEDDINGS_HPP_

// Word vectors for evaluation and export, in word2vec text/binary layouts.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "forest_embed/corpus.hpp"
#include "forest_embed/trainer.hpp"

namespace forest_embed {

class EmbeddingSet {
 public:
  // Row v is the vector of word v.
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  EmbeddingSet() = default;
  EmbeddingSet(std::vector<std::string> words, Matrix vectors, bool lowercase = true);

  // Columns of A become rows; words come from the vocabulary in id order.
  static EmbeddingSet from_model(const Vocabulary& vocab, const CodeMatrix& codes);

  std::size_t size() const { return words_.size(); }
  int dims() const { return static_cast<int>(vectors_.cols()); }
  const std::string& word(WordId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const { return words_; }
  const Matrix& vectors() const { return vectors_; }
  auto vector(WordId id) const { return vectors_.row(id); }
  bool lowercase() const { return lowercase_; }

  // Same normalization as corpus ingestion; numbers resolve to the number
  // token when the set has one.
  std::optional<WordId> find(std::string_view surface) const;

 private:
  std::vector<std::string> words_;
  Matrix vectors_;
  std::unordered_map<std::string, WordId> ids_;
  std::optional<WordId> number_id_;
  bool lowercase_ = true;
};

// "V M" header, then "word v1 ... vM" with 6 significant digits.
void write_embeddings_text(std::ostream& out, const EmbeddingSet& emb);
EmbeddingSet read_embeddings_text(std::istream& in, bool lowercase = true);

// "V M\n" header, then per word "word " + M little-endian float32 + "\n".
void write_embeddings_binary(std::ostream& out, const EmbeddingSet& emb);
EmbeddingSet read_embeddings_binary(std::istream& in, bool lowercase = true);

}  // namespace forest_embed

#endif  // FOREST_EMBED_EMBEDDINGS_HPP_
