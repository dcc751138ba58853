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

#ifndef FOREST_EMBED_PIPELINE_HPP_
#define FOREST_EMBED_PIPELINE_HPP_

// File-backed pipeline stages over a working directory. Each stage checks its
// inputs against the manifest, writes its artifacts and records itself.

#include <cstdint>
#include <filesystem>
#include <string>

#include "forest_embed/corpus.hpp"
#include "forest_embed/embeddings.hpp"
#include "forest_embed/forest.hpp"
#include "forest_embed/manifest.hpp"
#include "forest_embed/trainer.hpp"

namespace forest_embed {

// Artifact file names inside the working directory.
namespace artifact {
inline constexpr const char* kVocab = "vocab.tsv";
inline constexpr const char* kCooccur = "cooccur.txt";
inline constexpr const char* kPmi = "pmi.txt";
inline constexpr const char* kForest = "forest.txt";
inline constexpr const char* kModel = "model.ckpt";
inline constexpr const char* kSnapshot = "train.snapshot";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kEmbeddings = "embeddings.txt";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifact

class Pipeline {
 public:
  explicit Pipeline(std::filesystem::path workdir);

  const std::filesystem::path& workdir() const { return workdir_; }
  std::filesystem::path file(const char* name) const { return workdir_ / name; }
  PipelineManifest& manifest() { return manifest_; }

  Vocabulary build_vocab(const std::filesystem::path& corpus, std::uint64_t min_count);
  // Counts over the corpus the vocabulary was built from.
  CooccurrencePairs cooccur(int window);
  PmiMatrix pmi();
  // With `resume`, continues from the training snapshot when one exists.
  TrainResult train(const Forest& forest, const TrainConfig& config, bool resume = false,
                    const TrainHooks& hooks = {});

  // Trained embeddings, verified against the manifest.
  EmbeddingSet embeddings() const;

  // Stores `result` as <stage>.json and records the stage.
  std::filesystem::path record_eval(const std::string& stage,
                                    const std::vector<std::filesystem::path>& inputs,
                                    const nlohmann::json& result);

 private:
  std::filesystem::path corpus_path() const;

  std::filesystem::path workdir_;
  PipelineManifest manifest_;
};

}  // namespace forest_embed

#endif  // FOREST_EMBED_PIPELINE_HPP_
