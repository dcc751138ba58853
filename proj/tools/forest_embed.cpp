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

// forest-embed: corpus -> vocabulary -> cooccurrences -> PMI -> sparse
// hierarchical codes, plus evaluation and export. Stages share a working
// directory and a manifest; see README.md.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "forest_embed/error.hpp"
#include "forest_embed/eval.hpp"
#include "forest_embed/pipeline.hpp"

namespace fs = std::filesystem;
using namespace forest_embed;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;

struct Options {
  fs::path workdir = ".";
  fs::path corpus;
  std::uint64_t min_count = 10;
  int window = 5;

  int trees = 4;
  fs::path forest_file;
  bool flat = false;
  std::string penalty = "forest";
  TrainConfig train;
  std::string sampling = "weighted";
  std::string prox_threshold = "scaled";
  bool resume = false;

  fs::path embeddings;
  fs::path dataset;
  fs::path sentiment_train, sentiment_dev, sentiment_test;
  bool include_query_words = false;

  std::string format = "text";
  fs::path out;
  std::string words;
};

void configure_logging() {
  spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");
  if (const char* level = std::getenv("FOREST_EMBED_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

Forest resolve_forest(const Options& o) {
  if (!o.forest_file.empty()) {
    std::ifstream in(o.forest_file);
    if (!in) throw ValidationError("missing input: " + o.forest_file.string());
    std::stringstream text;
    text << in.rdbuf();
    return parse_forest(text.str());
  }
  if (o.trees < 1) throw ValidationError("--trees must be >= 1");
  return o.flat ? build_flat_forest(13 * o.trees) : build_default_forest(o.trees);
}

TrainConfig resolve_train_config(const Options& o) {
  TrainConfig c = o.train;
  c.sampling = o.sampling == "uniform-scaled" ? SamplingMode::kUniformScaled
                                              : SamplingMode::kWeighted;
  c.prox_threshold = o.prox_threshold == "fixed" ? ProxThresholdMode::kFixed
                                                 : ProxThresholdMode::kScaled;
  c.penalty = o.penalty == "l1" ? Penalty::kL1 : Penalty::kForest;
  c.validate();
  return c;
}

EmbeddingSet load_embeddings(Pipeline& pipeline, const Options& o) {
  if (o.embeddings.empty()) return pipeline.embeddings();
  std::ifstream in(o.embeddings, std::ios::binary);
  if (!in) throw ValidationError("missing input: " + o.embeddings.string());
  return o.embeddings.extension() == ".bin" ? read_embeddings_binary(in)
                                            : read_embeddings_text(in);
}

std::vector<fs::path> eval_inputs(const Pipeline& pipeline, const Options& o,
                                  std::vector<fs::path> datasets) {
  datasets.push_back(o.embeddings.empty() ? pipeline.file(artifact::kEmbeddings) : o.embeddings);
  return datasets;
}

void emit(const nlohmann::json& result) { std::cout << result.dump() << std::endl; }

nlohmann::json accuracy_json(const AccuracyResult& r) {
  return {{"accuracy", r.accuracy}, {"evaluated", r.evaluated}, {"total", r.total}};
}

void cmd_build_vocab(Pipeline& p, const Options& o) {
  const auto vocab = p.build_vocab(o.corpus, o.min_count);
  spdlog::info("vocabulary: {} types", vocab.size());
}

void cmd_cooccur(Pipeline& p, const Options& o) {
  const auto pairs = p.cooccur(o.window);
  spdlog::info("cooccurrences: {} distinct pairs, {} total", pairs.entries.size(),
               pairs.total_pairs);
}

void cmd_pmi(Pipeline& p, const Options&) {
  const auto pmi = p.pmi();
  spdlog::info("pmi: {} x {}, {} nonzeros", pmi.rows(), pmi.cols(), pmi.nnz());
}

void cmd_train(Pipeline& p, const Options& o) {
  const auto forest = resolve_forest(o);
  const auto config = resolve_train_config(o);
  spdlog::info("training: M={} ({} trees), lambda={}, eta0={}, {} iterations, {} threads",
               forest.size(), forest.roots().size(), config.lambda, config.eta0,
               config.iterations, config.threads);
  TrainHooks hooks;
  hooks.on_trace = [](std::uint64_t t, double value) {
    spdlog::debug("iteration {}: objective {:.6g}", t, value);
  };
  const auto r = p.train(forest, config, o.resume, hooks);
  spdlog::info("done in {:.1f} s: objective {:.6g} -> {:.6g}, nonzero fraction {:.4f}",
               r.report.wall_seconds, r.report.objective_trace.front().second,
               r.report.objective_trace.back().second, r.report.nonzero_fraction);
}

void cmd_eval_similarity(Pipeline& p, const Options& o) {
  const auto emb = load_embeddings(p, o);
  const auto ds = load_similarity_dataset(o.dataset);
  const auto r = eval_word_similarity(emb, ds);
  nlohmann::json j = {{"dataset", o.dataset.filename().string()},
                      {"spearman", r.rho},
                      {"evaluated", r.evaluated},
                      {"total", r.total}};
  p.record_eval("eval-similarity", eval_inputs(p, o, {o.dataset}), j);
  emit(j);
}

void cmd_eval_analogy(Pipeline& p, const Options& o) {
  const auto emb = load_embeddings(p, o);
  const auto r = eval_analogies_by_kind(emb, load_analogy_dataset(o.dataset),
                                        {.include_query_words = o.include_query_words});
  nlohmann::json j = {{"all", accuracy_json(r.all)},
                      {"syntactic", accuracy_json(r.syntactic)},
                      {"semantic", accuracy_json(r.semantic)},
                      {"include_query_words", o.include_query_words}};
  p.record_eval("eval-analogy", eval_inputs(p, o, {o.dataset}), j);
  emit(j);
}

void cmd_eval_completion(Pipeline& p, const Options& o) {
  const auto emb = load_embeddings(p, o);
  const auto r = eval_sentence_completion(emb, load_completion_dataset(o.dataset));
  const auto j = accuracy_json(r);
  p.record_eval("eval-completion", eval_inputs(p, o, {o.dataset}), j);
  emit(j);
}

void cmd_eval_sentiment(Pipeline& p, const Options& o) {
  const auto emb = load_embeddings(p, o);
  const auto r = eval_sentiment(
      emb, load_sentiment_dataset(o.sentiment_train, o.sentiment_dev, o.sentiment_test));
  nlohmann::json j = {{"test_accuracy", r.test_accuracy},
                      {"dev_accuracy", r.dev_accuracy},
                      {"chosen_l2", r.chosen_l2}};
  p.record_eval("eval-sentiment",
                eval_inputs(p, o, {o.sentiment_train, o.sentiment_dev, o.sentiment_test}), j);
  emit(j);
}

void cmd_export(Pipeline& p, const Options& o) {
  const auto emb = load_embeddings(p, o);
  std::ofstream out(o.out, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + o.out.string());
  if (o.format == "binary") {
    write_embeddings_binary(out, emb);
  } else {
    write_embeddings_text(out, emb);
  }
  out.close();
  spdlog::info("wrote {} vectors of dimension {} to {}", emb.size(), emb.dims(), o.out.string());
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string w; std::getline(in, w, ',');) {
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

Forest load_trained_forest(Pipeline& p) {
  const auto path = p.file(artifact::kForest);
  p.manifest().verify_input(path);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  return parse_forest(text.str());
}

// One row per known word with its M coefficients, and a companion
// <out>.dims.csv describing each dimension's place in the forest.
void cmd_inspect(Pipeline& p, const Options& o) {
  const auto emb = load_embeddings(p, o);
  const auto forest = load_trained_forest(p);
  if (forest.size() != emb.dims()) {
    throw ValidationError("forest has " + std::to_string(forest.size()) +
                          " nodes but embeddings have " + std::to_string(emb.dims()) +
                          " dimensions");
  }
  std::vector<WordId> rows;
  std::string missing;
  for (const auto& w : split_list(o.words)) {
    if (auto id = emb.find(w)) {
      rows.push_back(*id);
    } else {
      missing += (missing.empty() ? "oov: " : " ") + w;
      spdlog::warn("'{}' is out of vocabulary; row omitted", w);
    }
  }

  std::ofstream out(o.out, std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + o.out.string());
  out << "word";
  for (int m = 0; m < emb.dims(); ++m) out << ",d" << m;
  out << ",warnings\n";
  char buf[32];
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << emb.word(rows[r]);
    for (double v : emb.vector(rows[r])) {
      std::snprintf(buf, sizeof buf, "%.6g", v);
      out << ',' << buf;
    }
    out << ',' << (r == 0 ? missing : "") << '\n';
  }

  auto dims_path = o.out;
  dims_path.replace_extension(".dims.csv");
  std::ofstream dims(dims_path, std::ios::trunc);
  if (!dims) throw ValidationError("cannot write " + dims_path.string());
  dims << "dim,tree,node,parent,depth\n";
  std::vector<int> next_in_tree(forest.roots().size(), 0);
  for (NodeId i = 0; i < forest.size(); ++i) {
    const int tree = forest.tree_of(i);
    dims << i << ',' << tree << ',' << next_in_tree[tree]++ << ',' << forest.parent(i) << ','
         << forest.depth(i) << '\n';
  }
  spdlog::info("wrote {} rows to {} and {} dimensions to {}", rows.size(), o.out.string(),
               forest.size(), dims_path.string());
}

void cmd_run(Pipeline& p, const Options& o) {
  cmd_build_vocab(p, o);
  cmd_cooccur(p, o);
  cmd_pmi(p, o);
  cmd_train(p, o);
  if (!o.dataset.empty()) cmd_eval_similarity(p, o);
}

void add_train_options(CLI::App* cmd, Options& o) {
  auto* forest = cmd->add_option("--forest", o.forest_file, "Parent-array file (-1 = root)");
  auto* flat = cmd->add_flag("--flat", o.flat, "Flat forest of 13*trees singletons (l1 baseline)");
  forest->excludes(flat);
  flat->excludes(forest);
  cmd->add_option("--trees", o.trees, "Number of default 13-node trees")->capture_default_str();
  cmd->add_option("--penalty", o.penalty, "forest or l1")
      ->check(CLI::IsMember({"forest", "l1"}))
      ->capture_default_str();
  cmd->add_option("--lambda", o.train.lambda)->capture_default_str();
  cmd->add_option("--tau", o.train.tau)->capture_default_str();
  cmd->add_option("--eta0", o.train.eta0)->capture_default_str();
  cmd->add_option("--iters", o.train.iterations, "Entry updates")->capture_default_str();
  cmd->add_option("--batch", o.train.batch_size)->capture_default_str();
  cmd->add_option("--seed", o.train.seed)->capture_default_str();
  cmd->add_option("--threads", o.train.threads)->capture_default_str();
  cmd->add_option("--init-scale", o.train.init_scale)->capture_default_str();
  cmd->add_option("--sampling", o.sampling)
      ->check(CLI::IsMember({"weighted", "uniform-scaled"}))
      ->capture_default_str();
  cmd->add_option("--prox-threshold", o.prox_threshold)
      ->check(CLI::IsMember({"scaled", "fixed"}))
      ->capture_default_str();
  cmd->add_flag("--resume", o.resume, "Continue from the last training snapshot");
}

void add_embeddings_option(CLI::App* cmd, Options& o) {
  cmd->add_option("--embeddings", o.embeddings,
                  "Embeddings file (.bin = binary); defaults to the trained set");
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  Options o;
  o.train.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  CLI::App app{"Sparse hierarchical word embeddings from PMI matrices"};
  app.require_subcommand(1);
  app.add_option("--workdir", o.workdir, "Artifact directory")->capture_default_str();

  auto* build_vocab = app.add_subcommand("build-vocab", "Count tokens and build the vocabulary");
  build_vocab->add_option("--corpus", o.corpus, "One sentence per line")->required();
  build_vocab->add_option("--min-count", o.min_count)->capture_default_str();

  auto* cooccur = app.add_subcommand("cooccur", "Count windowed cooccurrences");
  cooccur->add_option("--window", o.window)->capture_default_str();

  auto* pmi = app.add_subcommand("pmi", "Build the PMI matrix");

  auto* train = app.add_subcommand("train", "Train the dictionary and codes");
  add_train_options(train, o);

  auto* eval_sim = app.add_subcommand("eval-similarity", "Spearman correlation on word pairs");
  eval_sim->add_option("--dataset", o.dataset)->required();
  add_embeddings_option(eval_sim, o);

  auto* eval_ana = app.add_subcommand("eval-analogy", "Analogies by vector offset");
  eval_ana->add_option("--dataset", o.dataset)->required();
  eval_ana->add_flag("--include-query-words", o.include_query_words,
                     "Allow a, b and c as answers");
  add_embeddings_option(eval_ana, o);

  auto* eval_comp = app.add_subcommand("eval-completion", "Sentence completion");
  eval_comp->add_option("--dataset", o.dataset)->required();
  add_embeddings_option(eval_comp, o);

  auto* eval_sent = app.add_subcommand("eval-sentiment", "Logistic regression on averaged vectors");
  eval_sent->add_option("--train", o.sentiment_train)->required();
  eval_sent->add_option("--dev", o.sentiment_dev)->required();
  eval_sent->add_option("--test", o.sentiment_test)->required();
  add_embeddings_option(eval_sent, o);

  auto* exp = app.add_subcommand("export", "Write embeddings in text or binary format");
  exp->add_option("--format", o.format)
      ->check(CLI::IsMember({"text", "binary"}))
      ->capture_default_str();
  exp->add_option("--out", o.out)->required();
  add_embeddings_option(exp, o);

  auto* inspect = app.add_subcommand("inspect", "Dump word coefficients and forest layout as CSV");
  inspect->add_option("--words", o.words, "Comma-separated words")->required();
  inspect->add_option("--out", o.out, "CSV path; dimensions go to <out>.dims.csv")->required();
  add_embeddings_option(inspect, o);

  auto* run = app.add_subcommand("run", "build-vocab, cooccur, pmi and train in one go");
  run->add_option("--corpus", o.corpus)->required();
  run->add_option("--min-count", o.min_count)->capture_default_str();
  run->add_option("--window", o.window)->capture_default_str();
  run->add_option("--similarity", o.dataset, "Evaluate on this similarity dataset afterwards");
  add_train_options(run, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  const std::vector<std::pair<CLI::App*, void (*)(Pipeline&, const Options&)>> commands = {
      {build_vocab, cmd_build_vocab}, {cooccur, cmd_cooccur},
      {pmi, cmd_pmi},                 {train, cmd_train},
      {eval_sim, cmd_eval_similarity}, {eval_ana, cmd_eval_analogy},
      {eval_comp, cmd_eval_completion}, {eval_sent, cmd_eval_sentiment},
      {exp, cmd_export},              {inspect, cmd_inspect},
      {run, cmd_run}};
  try {
    Pipeline pipeline(o.workdir);
    for (const auto& [cmd, fn] : commands) {
      if (cmd->parsed()) fn(pipeline, o);
    }
  } catch (const DivergenceError& e) {
    spdlog::error("{}", e.what());
    return kExitDivergence;
  } catch (const ValidationError& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
