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

#include "forest_embed/embeddings.hpp"

#include <bit>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "forest_embed/error.hpp"

namespace forest_embed {

EmbeddingSet::EmbeddingSet(std::vector<std::string> words, Matrix vectors, bool lowercase)
    : words_(std::move(words)), vectors_(std::move(vectors)), lowercase_(lowercase) {
  if (static_cast<Eigen::Index>(words_.size()) != vectors_.rows()) {
    throw ValidationError("embeddings: word count does not match vector count");
  }
  if (!vectors_.allFinite()) throw ValidationError("embeddings: non-finite value");
  ids_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!ids_.emplace(words_[i], static_cast<WordId>(i)).second) {
      throw ValidationError("embeddings: duplicate word '" + words_[i] + "'");
    }
  }
  if (auto it = ids_.find(std::string(Vocabulary::kNumberToken)); it != ids_.end()) {
    number_id_ = it->second;
  }
}

EmbeddingSet EmbeddingSet::from_model(const Vocabulary& vocab, const CodeMatrix& codes) {
  if (static_cast<std::size_t>(codes.cols()) != vocab.size()) {
    throw ValidationError("embeddings: code matrix has " + std::to_string(codes.cols()) +
                          " columns but vocabulary has " + std::to_string(vocab.size()) +
                          " tokens");
  }
  return EmbeddingSet(vocab.tokens(), codes.transpose(), vocab.lowercase());
}

std::optional<WordId> EmbeddingSet::find(std::string_view surface) const {
  if (number_id_ && is_number_token(surface)) return number_id_;
  auto it = ids_.find(normalize_token(surface, lowercase_));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void write_embeddings_text(std::ostream& out, const EmbeddingSet& emb) {
  out << emb.size() << ' ' << emb.dims() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < emb.size(); ++i) {
    out << emb.word(static_cast<WordId>(i));
    const auto row = emb.vector(static_cast<WordId>(i));
    for (Eigen::Index m = 0; m < row.size(); ++m) {
      std::snprintf(buf, sizeof buf, " %.6g", row(m));
      out << buf;
    }
    out << '\n';
  }
}

namespace {

std::pair<std::size_t, int> read_shape(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("embeddings: missing header");
  std::istringstream header(line);
  std::size_t v = 0;
  int m = 0;
  if (!(header >> v >> m) || m < 1) throw ValidationError("embeddings: bad header");
  return {v, m};
}

}  // namespace

EmbeddingSet read_embeddings_text(std::istream& in, bool lowercase) {
  const auto [v, m] = read_shape(in);
  std::vector<std::string> words(v);
  EmbeddingSet::Matrix vectors(static_cast<Eigen::Index>(v), m);
  for (std::size_t i = 0; i < v; ++i) {
    if (!(in >> words[i])) throw ValidationError("embeddings: truncated");
    for (int k = 0; k < m; ++k) {
      if (!(in >> vectors(static_cast<Eigen::Index>(i), k))) {
        throw ValidationError("embeddings: truncated vector for '" + words[i] + "'");
      }
    }
  }
  return EmbeddingSet(std::move(words), std::move(vectors), lowercase);
}

void write_embeddings_binary(std::ostream& out, const EmbeddingSet& emb) {
  out << emb.size() << ' ' << emb.dims() << '\n';
  for (std::size_t i = 0; i < emb.size(); ++i) {
    out << emb.word(static_cast<WordId>(i)) << ' ';
    const auto row = emb.vector(static_cast<WordId>(i));
    for (Eigen::Index m = 0; m < row.size(); ++m) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(row(m)));
      char bytes[4];
      for (int b = 0; b < 4; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
      out.write(bytes, 4);
    }
    out << '\n';
  }
}

EmbeddingSet read_embeddings_binary(std::istream& in, bool lowercase) {
  const auto [v, m] = read_shape(in);
  std::vector<std::string> words(v);
  EmbeddingSet::Matrix vectors(static_cast<Eigen::Index>(v), m);
  for (std::size_t i = 0; i < v; ++i) {
    if (!(in >> words[i])) throw ValidationError("embeddings: truncated");
    if (in.get() != ' ') throw ValidationError("embeddings: expected space after word");
    for (int k = 0; k < m; ++k) {
      unsigned char bytes[4];
      if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw ValidationError("embeddings: truncated vector for '" + words[i] + "'");
      }
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[b]) << (8 * b);
      vectors(static_cast<Eigen::Index>(i), k) = std::bit_cast<float>(bits);
    }
    if (in.peek() == '\n') in.get();
  }
  return EmbeddingSet(std::move(words), std::move(vectors), lowercase);
}

}  // namespace forest_embed
