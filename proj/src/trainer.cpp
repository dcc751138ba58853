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

#include "forest_embed/trainer.hpp"

#include <atomic>
#include <chrono>
#include <cmath>

#include <omp.h>

#include "forest_embed/checkpoint.hpp"
#include "forest_embed/error.hpp"
#include "json.hpp"

namespace forest_embed {

void TrainConfig::validate() const {
  if (!(lambda >= 0) || !(tau >= 0) || !(eta0 >= 0)) {
    throw ValidationError("lambda, tau and eta0 must be non-negative");
  }
  if (iterations < 1) throw ValidationError("iterations must be >= 1");
  if (batch_size < 1) throw ValidationError("batch size must be >= 1");
  if (!(init_scale >= 0)) throw ValidationError("init_scale must be non-negative");
  if (threads < 1) throw ValidationError("threads must be >= 1");
  if (trace_points < 1) throw ValidationError("trace_points must be >= 1");
}

double learning_rate(const TrainConfig& config, std::uint64_t t) {
  return config.eta0 /
         (1.0 + static_cast<double>(t) / static_cast<double>(config.iterations));
}

double prox_threshold(const TrainConfig& config, double eta) {
  return config.prox_threshold == ProxThresholdMode::kScaled ? eta * config.lambda
                                                             : config.lambda;
}

Model initialize_model(std::size_t num_contexts, std::size_t num_words, int dims,
                       const TrainConfig& config) {
  if (dims < 1) throw ValidationError("model needs at least one latent dimension");
  Rng rng(config.seed);
  std::uniform_real_distribution<double> init(-config.init_scale, config.init_scale);
  Model model;
  model.dictionary.resize(static_cast<Eigen::Index>(num_contexts), dims);
  model.codes.resize(dims, static_cast<Eigen::Index>(num_words));
  // Storage order is the draw order.
  double* d = model.dictionary.data();
  for (Eigen::Index i = 0; i < model.dictionary.size(); ++i) d[i] = init(rng);
  double* a = model.codes.data();
  for (Eigen::Index i = 0; i < model.codes.size(); ++i) a[i] = init(rng);
  return model;
}

void sgd_step(Dictionary& dictionary, CodeMatrix& codes, const PmiEntry& entry, double eta,
              const TrainConfig& config, const ProxPlan& plan, double gradient_scale) {
  auto d = dictionary.row(entry.context);
  auto a = codes.col(entry.word);
  const double r = entry.value - d.dot(a);
  const double step = 2.0 * eta;
  const double data_step = step * gradient_scale * r;
  for (Eigen::Index m = 0; m < a.size(); ++m) {
    const double dm = d(m);
    const double am = a(m);
    d(m) = dm + step * (gradient_scale * am * r - config.tau * dm);
    a(m) = am + data_step * dm;
  }
  const double t = prox_threshold(config, eta);
  if (config.penalty == Penalty::kL1) {
    l1_prox_inplace(a, t);
  } else {
    forest_prox_inplace(plan, a, t);
  }
  if (!d.allFinite() || !a.allFinite()) throw DivergenceError("divergence; reduce eta0");
}

double masked_squared_error(const PmiMatrix& pmi, const Dictionary& dictionary,
                            const CodeMatrix& codes) {
  double total = 0;
  for (const auto& e : pmi.entries()) {
    const double r = e.value - dictionary.row(e.context).dot(codes.col(e.word));
    total += r * r;
  }
  return total;
}

double objective(const PmiMatrix& pmi, const Dictionary& dictionary, const CodeMatrix& codes,
                 const Forest& forest, double lambda, double tau) {
  if (dictionary.cols() != codes.rows() || dictionary.cols() != forest.size() ||
      static_cast<std::size_t>(dictionary.rows()) != pmi.rows() ||
      static_cast<std::size_t>(codes.cols()) != pmi.cols()) {
    throw ValidationError("objective: inconsistent shapes");
  }
  const auto num_words = static_cast<std::ptrdiff_t>(pmi.cols());
  std::vector<double> per_word(num_words, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t v = 0; v < num_words; ++v) {
    const auto a = codes.col(v);
    double loss = 0;
    for (std::size_t k : pmi.col_entries(static_cast<WordId>(v))) {
      const auto& e = pmi.entry(k);
      const double r = e.value - dictionary.row(e.context).dot(a);
      loss += r * r;
    }
    per_word[v] = loss + (lambda != 0 ? lambda * omega(forest, a) : 0.0);
  }
  double total = 0;
  for (double x : per_word) total += x;
  return total + tau * dictionary.squaredNorm();
}

double nonzero_fraction(const CodeMatrix& codes) {
  if (codes.size() == 0) return 0;
  return static_cast<double>((codes.array() != 0.0).count()) /
         static_cast<double>(codes.size());
}

const char* to_string(SamplingMode mode) {
  return mode == SamplingMode::kWeighted ? "weighted" : "uniform-scaled";
}
const char* to_string(ProxThresholdMode mode) {
  return mode == ProxThresholdMode::kScaled ? "scaled" : "fixed";
}
const char* to_string(Penalty penalty) { return penalty == Penalty::kForest ? "forest" : "l1"; }

nlohmann::json config_to_json(const TrainConfig& c) {
  return {{"lambda", c.lambda},
          {"tau", c.tau},
          {"eta0", c.eta0},
          {"iterations", c.iterations},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"sampling", to_string(c.sampling)},
          {"prox_threshold", to_string(c.prox_threshold)},
          {"penalty", to_string(c.penalty)},
          {"init_scale", c.init_scale},
          {"threads", c.threads}};
}

std::string to_json(const TrainReport& report) {
  nlohmann::json j;
  j["iterations"] = report.iterations;
  j["objective_trace"] = nlohmann::json::array();
  for (const auto& [iter, value] : report.objective_trace) {
    j["objective_trace"].push_back({iter, value});
  }
  j["nonzero_fraction"] = report.nonzero_fraction;
  j["wall_seconds"] = report.wall_seconds;
  j["batches"] = report.batches;
  j["config"] = config_to_json(report.config);
  return j.dump(2);
}

TrainResult train(const PmiMatrix& pmi, const Forest& forest, const TrainConfig& config,
                  const TrainHooks& hooks) {
  config.validate();
  return train_from(initialize_model(pmi.rows(), pmi.cols(), forest.size(), config), pmi,
                    forest, config, hooks);
}

TrainResult train_from(Model start, const PmiMatrix& pmi, const Forest& forest,
                       const TrainConfig& config, const TrainHooks& hooks) {
  config.validate();
  if (pmi.nnz() == 0) throw ValidationError("train: pmi matrix has no entries");
  Model model = std::move(start);
  if (static_cast<std::size_t>(model.dictionary.rows()) != pmi.rows() ||
      static_cast<std::size_t>(model.codes.cols()) != pmi.cols() ||
      model.dictionary.cols() != forest.size() || model.codes.rows() != forest.size()) {
    throw ValidationError("train: model shape does not match pmi matrix and forest");
  }

  const auto wall_start = std::chrono::steady_clock::now();
  const ProxPlan plan(forest);
  const Forest penalty_forest =
      config.penalty == Penalty::kL1 ? build_flat_forest(forest.size()) : forest;
  const EntrySampler sampler(pmi);
  // Fresh runs continue the initialization stream; resumed runs reseed.
  Rng rng(config.seed);
  if (model.iteration == 0) {
    rng.discard(static_cast<unsigned long long>(model.dictionary.size() + model.codes.size()));
  } else {
    rng.seed(config.seed ^ (0x9e3779b97f4a7c15ULL * model.iteration));
  }

  TrainResult result;
  result.report.config = config;
  auto record = [&](std::uint64_t iter) {
    const double value = objective(pmi, model.dictionary, model.codes, penalty_forest,
                                   config.lambda, config.tau);
    result.report.objective_trace.emplace_back(iter, value);
    if (hooks.on_trace) hooks.on_trace(iter, value);
  };

  const std::uint64_t total = config.iterations;
  const std::uint64_t trace_every =
      std::max<std::uint64_t>(1, total / static_cast<std::uint64_t>(config.trace_points));
  const std::uint64_t snapshot_every = std::max<std::uint64_t>(1, total / 10);
  std::uint64_t t = model.iteration;
  std::uint64_t next_trace = (t / trace_every + 1) * trace_every;
  std::uint64_t next_snapshot = (t / snapshot_every + 1) * snapshot_every;
  if (t < total) record(t);

  omp_set_dynamic(0);
  while (t < total) {
    const std::size_t want =
        static_cast<std::size_t>(std::min<std::uint64_t>(config.batch_size, total - t));
    const auto batch = sample_batch(sampler, pmi, want, rng, config.sampling);
    if (hooks.on_batch) hooks.on_batch(batch);
    const double eta = learning_rate(config, t);
    const auto n = static_cast<std::ptrdiff_t>(batch.size());
    std::atomic<bool> diverged{false};
#pragma omp parallel for num_threads(config.threads) schedule(static) if (config.threads > 1 && n > 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto& e = pmi.entry(batch[i]);
      const double scale =
          config.sampling == SamplingMode::kUniformScaled ? uniform_gradient_scale(sampler, e)
                                                          : 1.0;
      try {
        sgd_step(model.dictionary, model.codes, e, eta, config, plan, scale);
      } catch (const DivergenceError&) {
        diverged.store(true);
      }
    }
    if (diverged.load()) {
      throw DivergenceError("divergence at iteration " + std::to_string(t) + "; reduce eta0");
    }
    t += batch.size();
    ++result.report.batches;
    model.iteration = t;
    if (t >= next_trace || t >= total) {
      record(t);
      next_trace = (t / trace_every + 1) * trace_every;
    }
    if (!config.checkpoint_path.empty() && t >= next_snapshot && t < total) {
      save_checkpoint(config.checkpoint_path, model);
      next_snapshot = (t / snapshot_every + 1) * snapshot_every;
    }
  }

  result.report.iterations = t;
  result.report.nonzero_fraction = nonzero_fraction(model.codes);
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  result.model = std::move(model);
  return result;
}

}  // namespace forest_embed
