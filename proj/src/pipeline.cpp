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

#include "forest_embed/pipeline.hpp"

#include <fstream>

#include "forest_embed/checkpoint.hpp"
#include "forest_embed/error.hpp"

namespace forest_embed {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("missing input: " + path.string());
  return in;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    writer(out);
    if (!out) throw ValidationError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

Pipeline::Pipeline(fs::path workdir)
    : workdir_(std::move(workdir)),
      manifest_(PipelineManifest::load_or_create(workdir_ / artifact::kManifest)) {
  fs::create_directories(workdir_);
}

fs::path Pipeline::corpus_path() const {
  const auto& stages = manifest_.data()["stages"];
  if (!stages.contains("build-vocab")) {
    throw ValidationError("missing input: " + file(artifact::kVocab).string() +
                          " (run build-vocab first)");
  }
  return stages["build-vocab"]["config"]["corpus"].get<std::string>();
}

Vocabulary Pipeline::build_vocab(const fs::path& corpus, std::uint64_t min_count) {
  auto in = open_input(corpus);
  const auto vocab = build_vocabulary(in, min_count);
  const auto out = file(artifact::kVocab);
  write_file(out, [&](std::ostream& o) { write_vocabulary(o, vocab); });
  manifest_.record_stage(
      "build-vocab", {corpus}, {{"vocab", out}},
      {{"corpus", fs::weakly_canonical(corpus).string()}, {"min_count", min_count},
       {"lowercase", true}});
  return vocab;
}

CooccurrencePairs Pipeline::cooccur(int window) {
  const auto corpus = corpus_path();
  const auto vocab_path = file(artifact::kVocab);
  manifest_.verify_input(corpus);
  manifest_.verify_input(vocab_path);
  auto vin = open_input(vocab_path);
  const auto vocab = read_vocabulary(vin);
  auto cin = open_input(corpus);
  const auto pairs = count_cooccurrences(cin, vocab, window);
  const auto out = file(artifact::kCooccur);
  write_file(out, [&](std::ostream& o) { write_cooccurrences(o, pairs); });
  manifest_.record_stage("cooccur", {corpus, vocab_path}, {{"cooccur", out}},
                         {{"window", window}});
  return pairs;
}

PmiMatrix Pipeline::pmi() {
  const auto in_path = file(artifact::kCooccur);
  manifest_.verify_input(in_path);
  auto in = open_input(in_path);
  const auto matrix = compute_pmi(read_cooccurrences(in));
  const auto out = file(artifact::kPmi);
  write_file(out, [&](std::ostream& o) { write_pmi(o, matrix); });
  manifest_.record_stage("pmi", {in_path}, {{"pmi", out}}, nlohmann::json::object());
  return matrix;
}

TrainResult Pipeline::train(const Forest& forest, const TrainConfig& config, bool resume,
                            const TrainHooks& hooks) {
  const auto pmi_path = file(artifact::kPmi);
  const auto vocab_path = file(artifact::kVocab);
  manifest_.verify_input(pmi_path);
  manifest_.verify_input(vocab_path);
  auto pin = open_input(pmi_path);
  const auto matrix = read_pmi(pin);
  auto vin = open_input(vocab_path);
  const auto vocab = read_vocabulary(vin);
  if (vocab.size() != matrix.cols()) {
    throw ValidationError("stale input: " + pmi_path.string() + " does not match " +
                          vocab_path.string());
  }

  const auto forest_path = file(artifact::kForest);
  write_file(forest_path, [&](std::ostream& o) { o << format_forest(forest); });

  TrainConfig cfg = config;
  const auto snapshot = file(artifact::kSnapshot);
  cfg.checkpoint_path = snapshot.string();
  TrainResult result;
  if (resume && fs::exists(snapshot)) {
    auto start = load_checkpoint(snapshot);
    result = train_from(std::move(start), matrix, forest, cfg, hooks);
  } else {
    result = forest_embed::train(matrix, forest, cfg, hooks);
  }
  fs::remove(snapshot);

  const auto model_path = file(artifact::kModel);
  save_checkpoint(model_path, result.model);
  const auto report_path = file(artifact::kReport);
  write_file(report_path, [&](std::ostream& o) { o << to_json(result.report) << '\n'; });
  const auto emb_path = file(artifact::kEmbeddings);
  const auto emb = EmbeddingSet::from_model(vocab, result.model.codes);
  write_file(emb_path, [&](std::ostream& o) { write_embeddings_text(o, emb); });

  auto echo = config_to_json(config);
  echo["dims"] = forest.size();
  echo["trees"] = forest.roots().size();
  manifest_.record_stage("train", {pmi_path, vocab_path},
                         {{"forest", forest_path},
                          {"model", model_path},
                          {"report", report_path},
                          {"embeddings", emb_path}},
                         echo);
  return result;
}

EmbeddingSet Pipeline::embeddings() const {
  const auto path = file(artifact::kEmbeddings);
  manifest_.verify_input(path);
  auto in = open_input(path);
  return read_embeddings_text(in);
}

fs::path Pipeline::record_eval(const std::string& stage, const std::vector<fs::path>& inputs,
                               const nlohmann::json& result) {
  const auto out = workdir_ / (stage + ".json");
  write_file(out, [&](std::ostream& o) { o << result.dump(2) << '\n'; });
  manifest_.record_stage(stage, inputs, {{stage, out}}, nlohmann::json::object());
  return out;
}

}  // namespace forest_embed
