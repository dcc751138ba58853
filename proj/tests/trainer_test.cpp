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

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "forest_embed/checkpoint.hpp"
#include "forest_embed/trainer.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace forest_embed;

namespace {

TrainConfig quiet_config() {
  TrainConfig c;
  c.lambda = 0;
  c.tau = 0;
  return c;
}

double squared_loss(const Eigen::VectorXd& d, const Eigen::VectorXd& a, double x, double tau) {
  const double r = x - d.dot(a);
  return r * r + tau * d.squaredNorm();
}

}  // namespace

TEST_CASE("sgd_step leaves an exact fit alone") {
  Dictionary d(1, 3);
  d << 1, 2, -1;
  CodeMatrix a(3, 1);
  a << 0.5, 1, 2;
  const double x = d.row(0).dot(a.col(0));
  const ProxPlan plan(parse_forest("-1 0 0"));
  const Dictionary d0 = d;
  const CodeMatrix a0 = a;
  sgd_step(d, a, {0, 0, x}, 0.3, quiet_config(), plan);
  CHECK(d == d0);
  CHECK(a == a0);
}

TEST_CASE("sgd_step scalar arithmetic") {
  Dictionary d(1, 1);
  d << 1;
  CodeMatrix a(1, 1);
  a << 1;
  const ProxPlan plan(build_flat_forest(1));
  sgd_step(d, a, {0, 0, 2.0}, 0.25, quiet_config(), plan);
  CHECK(d(0, 0) == 1.5);
  CHECK(a(0, 0) == 1.5);
}

TEST_CASE("sgd_step reads pre-step values for both updates") {
  Dictionary d(1, 2);
  d << 1, 2;
  CodeMatrix a(2, 1);
  a << 3, -1;
  const ProxPlan plan(build_flat_forest(2));
  auto config = quiet_config();
  config.tau = 0.1;
  const double eta = 0.01, x = 4.0;
  const double r = x - (1 * 3 + 2 * -1);
  sgd_step(d, a, {0, 0, x}, eta, config, plan);
  CHECK(d(0, 0) == doctest::Approx(1 + 2 * eta * (3 * r - 0.1 * 1)));
  CHECK(d(0, 1) == doctest::Approx(2 + 2 * eta * (-1 * r - 0.1 * 2)));
  CHECK(a(0, 0) == doctest::Approx(3 + 2 * eta * 1 * r));
  CHECK(a(1, 0) == doctest::Approx(-1 + 2 * eta * 2 * r));
}

TEST_CASE("sgd_step matches finite differences") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  const int m = 13;
  const ProxPlan plan(build_default_forest(1));
  for (int trial = 0; trial < 100; ++trial) {
    auto config = quiet_config();
    config.tau = std::abs(normal(rng));
    Dictionary d(1, m);
    CodeMatrix a(m, 1);
    for (int i = 0; i < m; ++i) {
      d(0, i) = normal(rng);
      a(i, 0) = normal(rng);
    }
    const double x = 2 * normal(rng);
    const double eta = 1e-3;
    const Eigen::VectorXd d0 = d.row(0).transpose(), a0 = a.col(0);
    sgd_step(d, a, {0, 0, x}, eta, config, plan);
    const Eigen::VectorXd gd = (d0 - d.row(0).transpose()) / eta;
    const Eigen::VectorXd ga = (a0 - a.col(0)) / eta;

    constexpr double h = 1e-6;
    Eigen::VectorXd fd_d(m), fd_a(m);
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd dp = d0, dm = d0, ap = a0, am = a0;
      dp(i) += h;
      dm(i) -= h;
      ap(i) += h;
      am(i) -= h;
      fd_d(i) = (squared_loss(dp, a0, x, config.tau) - squared_loss(dm, a0, x, config.tau)) / (2 * h);
      fd_a(i) = (squared_loss(d0, ap, x, config.tau) - squared_loss(d0, am, x, config.tau)) / (2 * h);
    }
    CHECK((gd - fd_d).lpNorm<Eigen::Infinity>() <= 1e-5 * std::max(1.0, fd_d.lpNorm<Eigen::Infinity>()));
    CHECK((ga - fd_a).lpNorm<Eigen::Infinity>() <= 1e-5 * std::max(1.0, fd_a.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("sgd_step threshold modes and divergence") {
  Dictionary d = Dictionary::Zero(1, 1);
  CodeMatrix a(1, 1);
  a << 1;
  const ProxPlan plan(build_flat_forest(1));
  auto config = quiet_config();
  config.lambda = 0.5;
  config.prox_threshold = ProxThresholdMode::kScaled;
  // Zero dictionary row: a only moves through the prox.
  sgd_step(d, a, {0, 0, 1.0}, 0.1, config, plan);
  CHECK(a(0, 0) == doctest::Approx(1 - 0.05));
  config.prox_threshold = ProxThresholdMode::kFixed;
  d.setZero();
  sgd_step(d, a, {0, 0, 1.0}, 0.1, config, plan);
  CHECK(a(0, 0) == doctest::Approx(0.45));

  Dictionary big(1, 1);
  big << 1e300;
  CodeMatrix abig(1, 1);
  abig << 1e300;
  CHECK_THROWS_WITH_AS(sgd_step(big, abig, {0, 0, 1.0}, 1.0, quiet_config(), plan),
                       "divergence; reduce eta0", DivergenceError);
}

TEST_CASE("uniform scaling constant") {
  const PmiMatrix equal(2, 2, {{0, 0, 1.5}, {1, 1, -1.5}, {0, 1, 1.5}});
  const auto sampler = build_sampler(equal);
  for (const auto& e : equal.entries()) CHECK(uniform_gradient_scale(sampler, e) == doctest::Approx(1.0));
  const PmiMatrix skew(2, 2, {{0, 0, 1.0}, {1, 1, -3.0}});
  const auto s2 = build_sampler(skew);
  CHECK(uniform_gradient_scale(s2, skew.entry(0)) == doctest::Approx(0.5));
  CHECK(uniform_gradient_scale(s2, skew.entry(1)) == doctest::Approx(1.5));
}

TEST_CASE("objective") {
  const auto pmi = synthetic::random_sparse(3, 6, 7, 0.5);
  const auto forest = build_default_forest(1);
  double sumsq = 0;
  for (const auto& e : pmi.entries()) sumsq += e.value * e.value;
  CHECK(objective(pmi, Dictionary::Zero(6, 13), CodeMatrix::Zero(13, 7), forest, 0.3, 0.2) ==
        doctest::Approx(sumsq));

  auto p = synthetic::planted_problem(5, 8, 9, 0.6);
  CHECK(objective(p.observed, p.dictionary, p.codes, p.forest, 0, 0) == doctest::Approx(0).epsilon(1e-12));

  TrainConfig c;
  c.seed = 3;
  const auto model = initialize_model(6, 7, 13, c);
  double expect = 0;
  for (const auto& e : pmi.entries()) {
    const double r = e.value - model.dictionary.row(e.context).dot(model.codes.col(e.word));
    expect += r * r;
  }
  for (int v = 0; v < 7; ++v) expect += 0.3 * oracle::omega(forest.parents(), model.codes.col(v));
  expect += 0.2 * model.dictionary.squaredNorm();
  CHECK(objective(pmi, model.dictionary, model.codes, forest, 0.3, 0.2) ==
        doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(objective(pmi, model.dictionary, model.codes, build_flat_forest(3), 0, 0),
                  ValidationError);
}

TEST_CASE("nonzero_fraction") {
  CHECK(nonzero_fraction(CodeMatrix::Zero(3, 4)) == 0.0);
  CHECK(nonzero_fraction(CodeMatrix::Ones(3, 4)) == 1.0);
  CodeMatrix a(2, 2);
  a << 1, 0, 2, 3;
  CHECK(nonzero_fraction(a) == 0.75);
}

TEST_CASE("config validation") {
  TrainConfig c;
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = TrainConfig{};
  c.iterations = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = TrainConfig{};
  c.lambda = -1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = TrainConfig{};
  CHECK(learning_rate(c, 0) == c.eta0);
  CHECK(learning_rate(c, c.iterations) == doctest::Approx(c.eta0 / 2));
}

TEST_CASE("training is deterministic for a seed") {
  const auto p = synthetic::planted_problem(1);
  TrainConfig c;
  c.iterations = 20000;
  c.eta0 = 0.01;
  c.lambda = 0.01;
  c.seed = 77;
  const auto r1 = train(p.observed, p.forest, c);
  const auto r2 = train(p.observed, p.forest, c);
  CHECK(r1.model.codes == r2.model.codes);
  CHECK(r1.model.dictionary == r2.model.dictionary);
  c.threads = 4;
  const auto r3 = train(p.observed, p.forest, c);
  CHECK(r3.model.codes == r1.model.codes);
  c.seed = 78;
  CHECK(train(p.observed, p.forest, c).model.codes != r1.model.codes);
}

TEST_CASE("large fixed threshold zeroes the codes") {
  const auto p = synthetic::planted_problem(2);
  TrainConfig c;
  c.iterations = 5000;
  c.lambda = 1e3;
  c.prox_threshold = ProxThresholdMode::kFixed;
  c.eta0 = 0.01;
  const auto r = train(p.observed, p.forest, c);
  // Columns never sampled keep their initialization; all others are zero.
  for (int v = 0; v < r.model.codes.cols(); ++v) {
    const bool touched = !p.observed.col_entries(v).empty();
    if (touched) CHECK(r.model.codes.col(v).isZero(0));
  }
  CHECK(r.report.nonzero_fraction < 0.05);
}

TEST_CASE("untouched columns keep their initialization") {
  std::vector<PmiEntry> entries = {{0, 0, 1.0}, {1, 0, -0.5}, {2, 2, 2.0}};
  const PmiMatrix pmi(3, 4, entries);
  TrainConfig c;
  c.iterations = 500;
  c.seed = 9;
  const auto init = initialize_model(3, 4, 13, c);
  const auto r = train(pmi, build_default_forest(1), c);
  CHECK(r.model.codes.col(1) == init.codes.col(1));
  CHECK(r.model.codes.col(3) == init.codes.col(3));
  CHECK(r.model.codes.col(0) != init.codes.col(0));
}

TEST_CASE("flat forest and l1 penalty agree bitwise") {
  const auto p = synthetic::planted_problem(3);
  TrainConfig c;
  c.iterations = 20000;
  c.eta0 = 0.01;
  c.lambda = 0.5;
  const auto forest = train(p.observed, build_flat_forest(13), c);
  c.penalty = Penalty::kL1;
  const auto l1 = train(p.observed, build_default_forest(1), c);
  CHECK(forest.model.codes == l1.model.codes);
  CHECK(forest.model.dictionary == l1.model.dictionary);
}

TEST_CASE("training reduces the objective") {
  const auto p = synthetic::planted_problem(4);
  TrainConfig c;
  c.iterations = 50000;
  c.eta0 = 0.01;
  c.lambda = 0.01;
  std::size_t batches = 0;
  TrainHooks hooks;
  hooks.on_batch = [&](std::span<const std::size_t> b) {
    ++batches;
    CHECK(b.size() <= c.batch_size);
  };
  const auto r = train(p.observed, p.forest, c, hooks);
  REQUIRE(r.report.objective_trace.size() >= 2);
  CHECK(r.report.objective_trace.front().first == 0);
  CHECK(r.report.objective_trace.back().first == c.iterations);
  CHECK(r.report.objective_trace.back().second < r.report.objective_trace.front().second);
  CHECK(r.report.iterations == c.iterations);
  CHECK(r.report.batches == batches);
  const auto json = to_json(r.report);
  CHECK(json.find("\"objective_trace\"") != std::string::npos);
  CHECK(json.find("\"nonzero_fraction\"") != std::string::npos);
}

TEST_CASE("divergent learning rate is reported") {
  const auto p = synthetic::planted_problem(6);
  TrainConfig c;
  c.iterations = 20000;
  c.eta0 = 50;
  c.init_scale = 1;
  CHECK_THROWS_AS(train(p.observed, p.forest, c), DivergenceError);
}

TEST_CASE("checkpoints") {
  const auto p = synthetic::planted_problem(7);
  const auto dir = std::filesystem::temp_directory_path() / "forest_embed_ckpt_test";
  std::filesystem::create_directories(dir);
  TrainConfig c;
  c.iterations = 10000;
  c.eta0 = 0.01;
  c.checkpoint_path = (dir / "snap.ckpt").string();
  const auto r = train(p.observed, p.forest, c);
  REQUIRE(std::filesystem::exists(c.checkpoint_path));
  const auto snap = load_checkpoint(c.checkpoint_path);
  CHECK(snap.iteration > 0);
  CHECK(snap.iteration < c.iterations);
  CHECK(snap.codes.rows() == 13);

  std::stringstream buf;
  write_checkpoint(buf, r.model);
  const auto header = buf.str().substr(0, 5);
  CHECK(header == "HSCK1");
  CHECK(buf.str().size() == 5 + 4 * 8 + 8 * (r.model.dictionary.size() + r.model.codes.size()));
  const auto back = read_checkpoint(buf);
  CHECK(back.dictionary == r.model.dictionary);
  CHECK(back.codes == r.model.codes);
  CHECK(back.iteration == r.model.iteration);

  // Resuming continues to the configured total.
  const auto resumed = train_from(snap, p.observed, p.forest, c);
  CHECK(resumed.report.iterations == c.iterations);

  std::stringstream junk("HSCK2........");
  CHECK_THROWS_AS(read_checkpoint(junk), ValidationError);
  std::filesystem::remove_all(dir);
}
