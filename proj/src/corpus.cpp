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

#include "forest_embed/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "forest_embed/error.hpp"

namespace forest_embed {

namespace {

std::uint64_t pack(WordId word, WordId context) {
  return (static_cast<std::uint64_t>(word) << 32) | context;
}

// Sorted (key, count) runs, merged by key.
using CountRun = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

CountRun collapse(std::vector<std::uint64_t>& keys) {
  std::sort(keys.begin(), keys.end());
  CountRun run;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    run.emplace_back(keys[i], j - i);
    i = j;
  }
  keys.clear();
  return run;
}

CountRun merge_runs(const CountRun& a, const CountRun& b) {
  CountRun out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

void build_index(std::size_t n, const std::vector<PmiEntry>& entries, bool by_row,
                 std::vector<std::size_t>& ptr, std::vector<std::size_t>& idx) {
  ptr.assign(n + 1, 0);
  for (const auto& e : entries) ++ptr[(by_row ? e.context : e.word) + 1];
  for (std::size_t i = 0; i < n; ++i) ptr[i + 1] += ptr[i];
  idx.resize(entries.size());
  std::vector<std::size_t> fill(ptr.begin(), ptr.end() - 1);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto key = by_row ? entries[k].context : entries[k].word;
    idx[fill[key]++] = k;
  }
}

std::string read_header_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError(std::string(what) + ": missing header");
  }
  return line;
}

}  // namespace

std::string normalize_token(std::string_view token, bool lowercase) {
  std::string out(token);
  if (lowercase) {
    for (auto& ch : out) {
      ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
  }
  return out;
}

bool is_number_token(std::string_view token) {
  if (!token.empty() && (token.front() == '+' || token.front() == '-')) {
    token.remove_prefix(1);
  }
  bool any_digit = false;
  for (char ch : token) {
    if (ch == ',' || ch == '.') continue;
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    any_digit = true;
  }
  return any_digit;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> counts,
                       bool lowercase)
    : tokens_(std::move(tokens)), counts_(std::move(counts)), lowercase_(lowercase) {
  if (tokens_.size() != counts_.size()) {
    throw ValidationError("vocabulary: token and count lists differ in length");
  }
  if (tokens_.size() > std::numeric_limits<WordId>::max()) {
    throw ValidationError("vocabulary: too many tokens");
  }
  ids_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!ids_.emplace(tokens_[i], static_cast<WordId>(i)).second) {
      throw ValidationError("vocabulary: duplicate token '" + tokens_[i] + "'");
    }
  }
  auto rare = ids_.find(std::string(kRareToken));
  auto number = ids_.find(std::string(kNumberToken));
  if (rare == ids_.end() || number == ids_.end()) {
    throw ValidationError("vocabulary: reserved tokens missing");
  }
  rare_id_ = rare->second;
  number_id_ = number->second;
}

std::optional<WordId> Vocabulary::find(std::string_view surface) const {
  if (surface == kRareToken) return rare_id_;
  if (surface == kNumberToken) return number_id_;
  if (is_number_token(surface)) return number_id_;
  auto it = ids_.find(normalize_token(surface, lowercase_));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::resolve(std::string_view surface) const {
  return find(surface).value_or(rare_id_);
}

Vocabulary build_vocabulary(std::istream& corpus, std::uint64_t min_count,
                            bool lowercase) {
  if (min_count == 0) throw ValidationError("min_count must be positive");
  std::unordered_map<std::string, std::uint64_t> raw;
  std::uint64_t numbers = 0;
  std::uint64_t seen = 0;
  std::string line;
  while (std::getline(corpus, line)) {
    for (auto tok : split_tokens(line)) {
      ++seen;
      if (is_number_token(tok)) {
        ++numbers;
      } else {
        ++raw[normalize_token(tok, lowercase)];
      }
    }
  }
  if (seen == 0) throw ValidationError("empty corpus");

  const std::string rare_token(Vocabulary::kRareToken);
  const std::string number_token(Vocabulary::kNumberToken);
  std::uint64_t rare = 0;
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [tok, n] : raw) {
    if (tok == rare_token) {
      rare += n;
    } else if (tok == number_token) {
      numbers += n;
    } else if (n < min_count) {
      rare += n;
    } else {
      kept.emplace_back(tok, n);
    }
  }
  kept.emplace_back(rare_token, rare);
  kept.emplace_back(number_token, numbers);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  tokens.reserve(kept.size());
  counts.reserve(kept.size());
  for (auto& [tok, n] : kept) {
    tokens.push_back(std::move(tok));
    counts.push_back(n);
  }
  return Vocabulary(std::move(tokens), std::move(counts), lowercase);
}

CooccurrencePairs make_cooccurrence_pairs(std::size_t vocab_size,
                                          std::vector<PairCount> raw) {
  std::sort(raw.begin(), raw.end(), [](const PairCount& a, const PairCount& b) {
    return pack(a.word, a.context) < pack(b.word, b.context);
  });
  CooccurrencePairs pairs;
  pairs.vocab_size = vocab_size;
  pairs.word_marginals.assign(vocab_size, 0);
  pairs.context_marginals.assign(vocab_size, 0);
  for (const auto& p : raw) {
    if (p.word >= vocab_size || p.context >= vocab_size) {
      throw ValidationError("cooccurrence id out of range");
    }
    if (p.count == 0) continue;
    if (!pairs.entries.empty() && pairs.entries.back().word == p.word &&
        pairs.entries.back().context == p.context) {
      pairs.entries.back().count += p.count;
    } else {
      pairs.entries.push_back(p);
    }
    pairs.total_pairs += p.count;
    pairs.word_marginals[p.word] += p.count;
    pairs.context_marginals[p.context] += p.count;
  }
  return pairs;
}

CooccurrencePairs count_cooccurrences(std::istream& corpus, const Vocabulary& vocab,
                                      int window) {
  if (window < 1) throw ValidationError("window must be >= 1");
  if (vocab.size() == 0) throw ValidationError("empty vocabulary");

  constexpr std::size_t kFlushAt = std::size_t{1} << 23;
  std::vector<std::uint64_t> keys;
  CountRun counts;
  std::vector<WordId> ids;
  std::string line;
  while (std::getline(corpus, line)) {
    ids.clear();
    for (auto tok : split_tokens(line)) ids.push_back(vocab.resolve(tok));
    const auto n = static_cast<std::ptrdiff_t>(ids.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto hi = std::min<std::ptrdiff_t>(n - 1, i + window);
      for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - window); j <= hi; ++j) {
        if (j != i) keys.push_back(pack(ids[i], ids[j]));
      }
    }
    if (keys.size() >= kFlushAt) counts = merge_runs(counts, collapse(keys));
  }
  counts = merge_runs(counts, collapse(keys));

  std::vector<PairCount> raw;
  raw.reserve(counts.size());
  for (const auto& [key, n] : counts) {
    raw.push_back({static_cast<WordId>(key >> 32), static_cast<WordId>(key & 0xffffffffu), n});
  }
  return make_cooccurrence_pairs(vocab.size(), std::move(raw));
}

PmiMatrix::PmiMatrix(std::size_t num_contexts, std::size_t num_words,
                     std::vector<PmiEntry> entries)
    : num_contexts_(num_contexts), num_words_(num_words), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.context >= num_contexts_ || e.word >= num_words_) {
      throw ValidationError("pmi entry out of range");
    }
    if (!std::isfinite(e.value) || e.value == 0.0) {
      throw ValidationError("pmi entries must be finite and nonzero");
    }
  }
  build_index(num_contexts_, entries_, true, row_ptr_, row_idx_);
  build_index(num_words_, entries_, false, col_ptr_, col_idx_);
  for (std::size_t c = 0; c < num_contexts_; ++c) {
    for (std::size_t k = row_ptr_[c] + 1; k < row_ptr_[c + 1]; ++k) {
      const auto& a = entries_[row_idx_[k - 1]];
      const auto& b = entries_[row_idx_[k]];
      if (a.word == b.word) throw ValidationError("duplicate pmi entry");
    }
  }
}

std::span<const std::size_t> PmiMatrix::row_entries(WordId context) const {
  return {row_idx_.data() + row_ptr_.at(context), row_ptr_.at(context + 1) - row_ptr_[context]};
}

std::span<const std::size_t> PmiMatrix::col_entries(WordId word) const {
  return {col_idx_.data() + col_ptr_.at(word), col_ptr_.at(word + 1) - col_ptr_[word]};
}

PmiMatrix compute_pmi(const CooccurrencePairs& pairs) {
  if (pairs.total_pairs == 0) throw ValidationError("no cooccurrences; cannot compute pmi");
  std::vector<PmiEntry> entries;
  entries.reserve(pairs.entries.size());
  const auto total = pairs.total_pairs;
  for (const auto& p : pairs.entries) {
    const auto wm = pairs.word_marginals[p.word];
    const auto cm = pairs.context_marginals[p.context];
    using u128 = unsigned __int128;
    if (static_cast<u128>(p.count) * total == static_cast<u128>(wm) * cm) continue;
    const double value = std::log(static_cast<double>(p.count) * static_cast<double>(total) /
                                  (static_cast<double>(wm) * static_cast<double>(cm)));
    if (value == 0.0) continue;
    entries.push_back({p.context, p.word, value});
  }
  std::sort(entries.begin(), entries.end(), [](const PmiEntry& a, const PmiEntry& b) {
    return a.context != b.context ? a.context < b.context : a.word < b.word;
  });
  return PmiMatrix(pairs.vocab_size, pairs.vocab_size, std::move(entries));
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out << vocab.token(static_cast<WordId>(i)) << '\t' << vocab.count(static_cast<WordId>(i))
        << '\n';
  }
}

Vocabulary read_vocabulary(std::istream& in, bool lowercase) {
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw ValidationError("vocabulary line " + std::to_string(lineno) + ": expected token<TAB>count");
    }
    tokens.push_back(line.substr(0, tab));
    try {
      std::size_t used = 0;
      counts.push_back(std::stoull(line.substr(tab + 1), &used));
    } catch (const std::exception&) {
      throw ValidationError("vocabulary line " + std::to_string(lineno) + ": bad count");
    }
  }
  return Vocabulary(std::move(tokens), std::move(counts), lowercase);
}

void write_cooccurrences(std::ostream& out, const CooccurrencePairs& pairs) {
  out << pairs.vocab_size << ' ' << pairs.vocab_size << ' ' << pairs.entries.size() << '\n';
  for (const auto& p : pairs.entries) {
    out << p.context << ' ' << p.word << ' ' << p.count << '\n';
  }
}

CooccurrencePairs read_cooccurrences(std::istream& in) {
  std::istringstream header(read_header_line(in, "cooccurrence file"));
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(header >> rows >> cols >> nnz) || rows != cols) {
    throw ValidationError("cooccurrence file: bad header");
  }
  std::vector<PairCount> raw;
  raw.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::uint64_t c = 0, v = 0, n = 0;
    if (!(in >> c >> v >> n)) throw ValidationError("cooccurrence file: truncated");
    if (c >= rows || v >= cols) throw ValidationError("cooccurrence file: id out of range");
    raw.push_back({static_cast<WordId>(v), static_cast<WordId>(c), n});
  }
  return make_cooccurrence_pairs(rows, std::move(raw));
}

void write_pmi(std::ostream& out, const PmiMatrix& pmi) {
  out << pmi.rows() << ' ' << pmi.cols() << ' ' << pmi.nnz() << '\n';
  out << std::setprecision(17);
  for (const auto& e : pmi.entries()) {
    out << e.context << ' ' << e.word << ' ' << e.value << '\n';
  }
}

PmiMatrix read_pmi(std::istream& in) {
  std::istringstream header(read_header_line(in, "pmi file"));
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(header >> rows >> cols >> nnz)) throw ValidationError("pmi file: bad header");
  std::vector<PmiEntry> entries;
  entries.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::uint64_t c = 0, v = 0;
    double value = 0;
    if (!(in >> c >> v >> value)) throw ValidationError("pmi file: truncated");
    entries.push_back({static_cast<WordId>(c), static_cast<WordId>(v), value});
  }
  return PmiMatrix(rows, cols, std::move(entries));
}

}  // namespace forest_embed
