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

#include "forest_embed/datasets.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>

#include "forest_embed/corpus.hpp"
#include "forest_embed/error.hpp"

namespace forest_embed {

namespace {

constexpr std::string_view kBlank = "[BLANK]";

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

std::string where(std::size_t lineno) { return "line " + std::to_string(lineno) + ": "; }

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

}  // namespace

bool is_syntactic_section(const std::string& section) { return section.starts_with("gram"); }

SimilarityDataset read_similarity_dataset(std::istream& in, std::string name) {
  SimilarityDataset ds;
  ds.name = std::move(name);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip(line);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_on(line, '\t');
    if (fields.size() != 3) {
      fields.clear();
      for (auto tok : split_tokens(line)) fields.emplace_back(tok);
    }
    if (fields.size() != 3) throw ValidationError(where(lineno) + "expected 3 fields");
    double score = 0;
    try {
      score = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw ValidationError(where(lineno) + "bad score '" + fields[2] + "'");
    }
    if (!std::isfinite(score)) throw ValidationError(where(lineno) + "non-finite score");
    ds.items.push_back({strip(fields[0]), strip(fields[1]), score});
  }
  if (ds.items.size() < 2) throw ValidationError("similarity dataset needs at least 2 pairs");
  return ds;
}

AnalogyDataset read_analogy_dataset(std::istream& in) {
  AnalogyDataset ds;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens.front() == ":") {
      section = tokens.size() > 1 ? std::string(tokens[1]) : std::string();
      continue;
    }
    if (tokens.front().starts_with(':')) {
      section = std::string(tokens.front().substr(1));
      continue;
    }
    if (tokens.size() != 4) throw ValidationError(where(lineno) + "expected 4 words");
    ds.items.push_back({std::string(tokens[0]), std::string(tokens[1]), std::string(tokens[2]),
                        std::string(tokens[3]), section});
  }
  return ds;
}

CompletionDataset read_completion_dataset(std::istream& in) {
  CompletionDataset ds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip(line).empty()) continue;
    const auto fields = split_on(line, '\t');
    if (fields.size() != 3) throw ValidationError(where(lineno) + "expected 3 tab-separated fields");
    CompletionItem item;
    bool has_blank = false;
    for (auto tok : split_tokens(fields[0])) {
      if (tok == kBlank) {
        has_blank = true;
      } else {
        item.context.emplace_back(tok);
      }
    }
    if (!has_blank) throw ValidationError(where(lineno) + "sentence has no [BLANK]");
    const auto cands = split_on(strip(fields[1]), '|');
    if (cands.size() != 5) throw ValidationError(where(lineno) + "expected 5 candidates");
    for (int k = 0; k < 5; ++k) item.candidates[k] = strip(cands[k]);
    try {
      item.answer = std::stoi(fields[2]);
    } catch (const std::exception&) {
      throw ValidationError(where(lineno) + "bad answer index");
    }
    if (item.answer < 0 || item.answer > 4) {
      throw ValidationError(where(lineno) + "answer index out of range");
    }
    ds.items.push_back(std::move(item));
  }
  return ds;
}

std::vector<SentimentExample> read_sentiment_split(std::istream& in) {
  std::vector<SentimentExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ValidationError(where(lineno) + "expected label<TAB>sentence");
    const auto label = strip(line.substr(0, tab));
    if (label != "0" && label != "1") throw ValidationError(where(lineno) + "label must be 0 or 1");
    SentimentExample ex;
    ex.label = label == "1" ? 1 : 0;
    for (auto tok : split_tokens(std::string_view(line).substr(tab + 1))) ex.tokens.emplace_back(tok);
    out.push_back(std::move(ex));
  }
  return out;
}

SimilarityDataset load_similarity_dataset(const std::filesystem::path& path) {
  auto in = open(path);
  return read_similarity_dataset(in, path.stem().string());
}

AnalogyDataset load_analogy_dataset(const std::filesystem::path& path) {
  auto in = open(path);
  return read_analogy_dataset(in);
}

CompletionDataset load_completion_dataset(const std::filesystem::path& path) {
  auto in = open(path);
  return read_completion_dataset(in);
}

SentimentDataset load_sentiment_dataset(const std::filesystem::path& train,
                                        const std::filesystem::path& dev,
                                        const std::filesystem::path& test) {
  SentimentDataset ds;
  auto tr = open(train);
  ds.train = read_sentiment_split(tr);
  auto dv = open(dev);
  ds.dev = read_sentiment_split(dv);
  auto te = open(test);
  ds.test = read_sentiment_split(te);
  return ds;
}

}  // namespace forest_embed
