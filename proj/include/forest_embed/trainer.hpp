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

#ifndef FOREST_EMBED_TRAINER_HPP_
#define FOREST_EMBED_TRAINER_HPP_

// Stochastic proximal training of the dictionary D (C x M) and the code matrix
// A (M x V) on the nonzero entries of a PMI matrix X.
//
// Each step samples an entry x_{c,v} and, with r = x - d_c . a_v,
//
//   d_c <- d_c + 2 eta (g a_v r - tau d_c)
//   a_v <- prox(a_v + 2 eta g d_c r)
//
// where both right-hand sides read the pre-step values and g is 1 under
// |x|-weighted sampling, or |x| NNZ / sum|x| under uniform sampling. Entries in
// one batch share no row of D and no column of A, so they are applied in
// parallel without locks.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "forest_embed/corpus.hpp"
#include "forest_embed/forest.hpp"
#include "forest_embed/prox.hpp"
#include "forest_embed/sampler.hpp"
#include "json.hpp"

namespace forest_embed {

// Row d_c is contiguous.
using Dictionary = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
// Column a_v is contiguous; column v is the representation of word v.
using CodeMatrix = Eigen::MatrixXd;

enum class ProxThresholdMode {
  kScaled,  // eta_t * lambda
  kFixed,   // lambda
};

enum class Penalty {
  kForest,
  kL1,  // dedicated soft-thresholding path, ignores the forest topology
};

struct TrainConfig {
  double lambda = 0.1;
  double tau = 1e-5;
  double eta0 = 0.05;
  std::uint64_t iterations = 1'000'000;
  std::size_t batch_size = 16;
  std::uint64_t seed = 1;
  SamplingMode sampling = SamplingMode::kWeighted;
  ProxThresholdMode prox_threshold = ProxThresholdMode::kScaled;
  Penalty penalty = Penalty::kForest;
  double init_scale = 0.1;
  int threads = 1;
  int trace_points = 100;
  // Snapshot every iterations/10 when non-empty.
  std::string checkpoint_path;

  void validate() const;
};

// eta0 / (1 + t / T).
double learning_rate(const TrainConfig& config, std::uint64_t t);

double prox_threshold(const TrainConfig& config, double eta);

struct Model {
  Dictionary dictionary;
  CodeMatrix codes;
  std::uint64_t iteration = 0;
};

// Entries uniform in [-init_scale, init_scale], D first (row-major) then A
// (column-major), from an Rng seeded with config.seed.
Model initialize_model(std::size_t num_contexts, std::size_t num_words, int dims,
                       const TrainConfig& config);

// Scale g that makes a uniform draw match |x|-weighted sampling in expectation.
inline double uniform_gradient_scale(const EntrySampler& sampler, const PmiEntry& entry) {
  return std::abs(entry.value) * static_cast<double>(sampler.size()) / sampler.total_weight();
}

// One update of d_c and a_v for `entry`. Throws DivergenceError if any updated
// value is non-finite.
void sgd_step(Dictionary& dictionary, CodeMatrix& codes, const PmiEntry& entry, double eta,
              const TrainConfig& config, const ProxPlan& plan, double gradient_scale = 1.0);

// Squared loss over the stored entries + lambda * sum_v omega(a_v)
// + tau * ||D||_F^2. Summation order is fixed, so the value does not depend on
// the thread count.
double objective(const PmiMatrix& pmi, const Dictionary& dictionary, const CodeMatrix& codes,
                 const Forest& forest, double lambda, double tau);

// Loss term alone.
double masked_squared_error(const PmiMatrix& pmi, const Dictionary& dictionary,
                            const CodeMatrix& codes);

double nonzero_fraction(const CodeMatrix& codes);

struct TrainReport {
  std::uint64_t iterations = 0;
  std::vector<std::pair<std::uint64_t, double>> objective_trace;
  double nonzero_fraction = 0;
  double wall_seconds = 0;
  std::uint64_t batches = 0;
  TrainConfig config;
};

nlohmann::json config_to_json(const TrainConfig& config);
std::string to_json(const TrainReport& report);

struct TrainResult {
  Model model;
  TrainReport report;
};

struct TrainHooks {
  // Called on the coordinator with each sampled batch (entry indexes).
  std::function<void(std::span<const std::size_t>)> on_batch;
  std::function<void(std::uint64_t, double)> on_trace;
};

TrainResult train(const PmiMatrix& pmi, const Forest& forest, const TrainConfig& config,
                  const TrainHooks& hooks = {});

// Continues from `start` (e.g. a checkpoint) up to config.iterations.
TrainResult train_from(Model start, const PmiMatrix& pmi, const Forest& forest,
                       const TrainConfig& config, const TrainHooks& hooks = {});

const char* to_string(SamplingMode mode);
const char* to_string(ProxThresholdMode mode);
const char* to_string(Penalty penalty);

}  // namespace forest_embed

#endif  // FOREST_EMBED_TRAINER_HPP_
