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

#ifndef FOREST_EMBED_DATASETS_HPP_
#define FOREST_EMBED_DATASETS_HPP_

// Benchmark dataset readers.

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace forest_embed {

struct SimilarityItem {
  std::string word1;
  std::string word2;
  double score;
};

struct SimilarityDataset {
  std::string name;
  std::vector<SimilarityItem> items;
};

struct AnalogyItem {
  std::string a, b, c, d;  // a : b :: c : d
  std::string section;
};

struct AnalogyDataset {
  std::vector<AnalogyItem> items;
};

// Sections named "gram..." hold syntactic questions; all others are semantic.
bool is_syntactic_section(const std::string& section);

struct CompletionItem {
  std::vector<std::string> context;  // sentence words without the blank
  std::array<std::string, 5> candidates;
  int answer = 0;  // 0-based
};

struct CompletionDataset {
  std::vector<CompletionItem> items;
};

struct SentimentExample {
  std::vector<std::string> tokens;
  int label = 0;  // 0 or 1
};

struct SentimentDataset {
  std::vector<SentimentExample> train, dev, test;
};

// "word1<TAB>word2<TAB>score"; blank lines and '#' comments skipped.
SimilarityDataset read_similarity_dataset(std::istream& in, std::string name);
// Four words per line; ": name" lines start a section.
AnalogyDataset read_analogy_dataset(std::istream& in);
// "sentence with [BLANK]<TAB>c1|c2|c3|c4|c5<TAB>answer_index".
CompletionDataset read_completion_dataset(std::istream& in);
// "label<TAB>sentence".
std::vector<SentimentExample> read_sentiment_split(std::istream& in);

SimilarityDataset load_similarity_dataset(const std::filesystem::path& path);
AnalogyDataset load_analogy_dataset(const std::filesystem::path& path);
CompletionDataset load_completion_dataset(const std::filesystem::path& path);
SentimentDataset load_sentiment_dataset(const std::filesystem::path& train,
                                        const std::filesystem::path& dev,
                                        const std::filesystem::path& test);

}  // namespace forest_embed

#endif  // FOREST_EMBED_DATASETS_HPP_
