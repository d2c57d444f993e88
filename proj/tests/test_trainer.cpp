//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dagat/checkpoint.h"
#include "dagat/synthetic.h"
#include "dagat/trainer.h"
#include "test_util.h"

namespace dagat {
namespace {

using test::tiny_config;

const std::vector<Category> kDude { Category::kDudeActive,
                                    Category::kDudeInactive };

std::vector<GraphSample> synthetic_samples(std::size_t count,
                                           std::uint64_t seed) {
  SyntheticOptions opts;
  opts.count = count;
  opts.seed = seed;
  opts.min_ligand_atoms = 4;
  opts.max_ligand_atoms = 6;
  opts.min_protein_atoms = 8;
  opts.max_protein_atoms = 12;
  opts.num_proteins = 6;
  std::vector<GraphSample> out;
  for (const ComplexRecord &r: generate_synthetic(opts))
    out.push_back(build_sample(r));
  return out;
}

TrainConfig dude_config(std::size_t iterations) {
  TrainConfig cfg;
  cfg.categories = kDude;
  cfg.batch_size = 4;
  cfg.iterations = iterations;
  cfg.learning_rate = 1e-3;
  cfg.seed = 9;
  cfg.checkpoint_every = 1;
  return cfg;
}

TEST(BceTest, HandValues) {
  EXPECT_NEAR(bce(0.5, 1), std::log(2.0), 1e-15);
  EXPECT_NEAR(bce(0.5, 0), std::log(2.0), 1e-15);
  EXPECT_NEAR(bce(0.9, 1), -std::log(0.9), 1e-15);
  EXPECT_NEAR(bce(0.9, 0), -std::log(0.1), 1e-14);
  EXPECT_NEAR(bce(0.0, 1), -std::log(1e-12), 1e-9);
  EXPECT_NEAR(bce(1.0, 0), -std::log(1e-12), 1e-3);
  EXPECT_TRUE(std::isfinite(bce(1.0, 0)));
  EXPECT_THROW(bce(0.5, 2), std::invalid_argument);
}

TEST(BceTest, BatchMean) {
  const double p[] = { 0.2, 0.7, 0.95, 0.4 };
  const int y[] = { 0, 1, 1, 0 };
  double oracle = 0, mean = 0;
  for (int k = 0; k < 4; ++k) {
    oracle += y[k] ? -std::log(p[k]) : -std::log(1 - p[k]);
    mean += bce(p[k], y[k]);
  }
  EXPECT_NEAR(mean / 4, oracle / 4, 1e-12);
}

TEST(BceTest, LossGradient) {
  for (int y: { 0, 1 }) {
    Tape tape;
    const Var p = tape.leaf(Matrix::scalar(0.3));
    const Var l = bce_loss(p, y);
    EXPECT_NEAR(l.value().item(), bce(0.3, y), 1e-15);
    tape.backward(l);
    EXPECT_NEAR(tape.grad(p).item(), y ? -1 / 0.3 : 1 / 0.7, 1e-12);
  }
}

TEST(SamplerTest, BalancedAndSeeded) {
  CategoryPools pools;
  pools[Category::kDudeActive] = { 0, 1, 2 };
  pools[Category::kDudeInactive] = { 3, 4, 5, 6, 7 };
  pools[Category::kPdbbindPositive] = { 8 };
  pools[Category::kPdbbindNegative] = { 9, 10 };
  const std::vector<Category> cats(kTrainingCategories.begin(),
                                   kTrainingCategories.end());
  BalancedBatchSampler a(pools, cats, 32, 42), b(pools, cats, 32, 42),
      c(pools, cats, 32, 43);
  bool differs = false;
  for (int k = 0; k < 20; ++k) {
    const auto x = a.next();
    ASSERT_EQ(x.size(), 32u);
    for (std::size_t i = 0; i < 32; ++i) {
      const auto &pool = pools[cats[i / 8]];
      EXPECT_NE(std::find(pool.begin(), pool.end(), x[i]), pool.end());
    }
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(SamplerTest, UniformWithinPool) {
  CategoryPools pools;
  pools[Category::kDudeActive] = { 0, 1, 2, 3, 4 };
  pools[Category::kDudeInactive] = { 5, 6, 7, 8 };
  BalancedBatchSampler s(pools, kDude, 16, 7);
  std::map<std::size_t, double> counts;
  for (int k = 0; k < 1000; ++k)
    for (std::size_t idx: s.next())
      counts[idx] += 1;
  // 8000 draws per category; chi-square critical values at p = 0.01 for
  // 4 and 3 degrees of freedom.
  auto chi2 = [&](std::size_t lo, std::size_t hi) {
    const double expected = 8000.0 / static_cast<double>(hi - lo);
    double x = 0;
    for (std::size_t i = lo; i < hi; ++i)
      x += (counts[i] - expected) * (counts[i] - expected) / expected;
    return x;
  };
  EXPECT_LT(chi2(0, 5), 13.277);
  EXPECT_LT(chi2(5, 9), 11.345);
}

TEST(SamplerTest, EmptyPoolNamesCategory) {
  CategoryPools pools;
  pools[Category::kDudeActive] = { 0 };
  try {
    BalancedBatchSampler s(pools, kDude, 4, 0);
    FAIL() << "expected an exception";
  } catch (const std::invalid_argument &e) {
    EXPECT_NE(std::string(e.what()).find("dude_inactive"), std::string::npos)
        << e.what();
  }
}

TEST(TrainConfigTest, BatchMustSplitEvenly) {
  TrainConfig cfg;
  cfg.batch_size = 30;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.batch_size = 32;
  EXPECT_NO_THROW(cfg.validate());
}

TEST(PoolsTest, OnlyLabelledRequestedCategories) {
  auto samples = synthetic_samples(6, 1);
  samples[0].label.reset();
  samples[1].category = Category::kPdbbindPositive;
  const CategoryPools pools = make_pools(samples, kDude);
  std::size_t total = 0;
  for (const auto &[cat, idx]: pools)
    for (std::size_t i: idx) {
      EXPECT_NE(i, 0u);
      EXPECT_NE(i, 1u);
      EXPECT_EQ(samples[i].category, cat);
      ++total;
    }
  EXPECT_EQ(total, 4u);
}

TEST(AdamTest, MatchesHandUpdate) {
  ModelParams p = ModelParams::initialize(tiny_config(), 1);
  const ModelParams start = p;
  std::vector<Matrix> g1, g2;
  std::mt19937_64 rng(3);
  for (const Matrix *m: p.tensors()) {
    g1.push_back(test::random_matrix(m->rows(), m->cols(), rng));
    g2.push_back(test::random_matrix(m->rows(), m->cols(), rng));
  }
  const double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  Adam adam(p, lr, b1, b2, eps);
  adam.step(p, g1);
  adam.step(p, g2);
  EXPECT_EQ(adam.steps(), 2u);
  const auto before = start.tensors();
  const auto after = p.tensors();
  for (std::size_t t = 0; t < before.size(); ++t)
    for (std::size_t i = 0; i < before[t]->size(); ++i) {
      double w = (*before[t])[i], m = 0, v = 0;
      int step = 0;
      for (const auto *g: { &g1, &g2 }) {
        ++step;
        const double gi = (*g)[t][i];
        m = b1 * m + (1 - b1) * gi;
        v = b2 * v + (1 - b2) * gi * gi;
        const double mh = m / (1 - std::pow(b1, step));
        const double vh = v / (1 - std::pow(b2, step));
        w -= lr * mh / (std::sqrt(vh) + eps);
      }
      EXPECT_NEAR((*after[t])[i], w, 1e-14);
    }
}

TEST(BatchGradientTest, ThreadCountDoesNotChangeResult) {
  const auto samples = synthetic_samples(6, 2);
  std::vector<const GraphSample *> batch;
  for (const auto &s: samples)
    batch.push_back(&s);
  const ModelParams p = ModelParams::initialize(tiny_config(), 2);
  const BatchGradient one = batch_gradient(batch, p, tiny_config(), true, 5, 1);
  const BatchGradient three =
      batch_gradient(batch, p, tiny_config(), true, 5, 3);
  EXPECT_EQ(one.loss, three.loss);
  EXPECT_EQ(one.probability, three.probability);
  EXPECT_EQ(one.grads, three.grads);
  const BatchGradient other =
      batch_gradient(batch, p, tiny_config(), true, 6, 1);
  EXPECT_NE(one.loss, other.loss);
}

TEST(BatchGradientTest, MeanOfSampleLosses) {
  const auto samples = synthetic_samples(4, 3);
  std::vector<const GraphSample *> batch;
  for (const auto &s: samples)
    batch.push_back(&s);
  const ModelParams p = ModelParams::initialize(tiny_config(), 3);
  const BatchGradient g = batch_gradient(batch, p, tiny_config(), false, 0);
  double mean = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double prob = predict(samples[k], p, tiny_config());
    EXPECT_EQ(g.probability[k], prob);
    mean += bce(prob, *samples[k].label) / 4;
  }
  EXPECT_NEAR(g.loss, mean, 1e-15);
}

TEST(TrainStepTest, NoContactsLeavesMuUnchanged) {
  auto samples = synthetic_samples(2, 4);
  for (auto &s: samples)
    s.inter_mask = Matrix(s.num_atoms(), s.num_atoms());
  std::vector<const GraphSample *> batch { &samples[0], &samples[1] };
  ModelParams p = ModelParams::initialize(tiny_config(), 4);
  const BatchGradient g = batch_gradient(batch, p, tiny_config(), true, 1);
  const double mu = p.mu_value(), sigma = p.sigma();
  Adam adam(p, 1e-3);
  adam.step(p, g.grads);
  EXPECT_EQ(p.mu_value(), mu);
  EXPECT_EQ(p.sigma(), sigma);
}

TEST(TrainStepTest, SmallStepReducesLoss) {
  const auto samples = synthetic_samples(1, 5);
  std::vector<const GraphSample *> batch { &samples[0] };
  ModelParams p = ModelParams::initialize(tiny_config(), 5);
  const BatchGradient g = batch_gradient(batch, p, tiny_config(), false, 0);
  Adam adam(p, 1e-5);
  adam.step(p, g.grads);
  const BatchGradient after = batch_gradient(batch, p, tiny_config(), false, 0);
  EXPECT_LT(after.loss, g.loss);
}

TEST(TrainTest, SeededRunsAreBitwiseIdentical) {
  const auto data = synthetic_samples(16, 6);
  const TrainConfig cfg = dude_config(100);
  const TrainResult a = train(data, {}, tiny_config(), cfg);
  TrainConfig threaded = cfg;
  threaded.threads = 2;
  const TrainResult b = train(data, {}, tiny_config(), threaded);
  ASSERT_EQ(a.log.size(), 100u);
  ASSERT_EQ(b.log.size(), 100u);
  for (std::size_t k = 0; k < 100; ++k)
    EXPECT_EQ(a.log[k].train_loss, b.log[k].train_loss) << "iteration " << k;
  EXPECT_EQ(a.params, b.params);
  for (const TrainLogRow &r: a.log)
    EXPECT_GT(r.sigma, 0);
  EXPECT_EQ(a.params.num_scalars(),
            ModelParams::initialize(tiny_config(), 0).num_scalars());
}

TEST(TrainTest, WritesLogAndCheckpoints) {
  test::TempDir dir;
  const auto data = synthetic_samples(16, 7);
  std::vector<GraphSample> tr, va;
  split_by_protein(data, 0.34, 1, tr, va);
  TrainConfig cfg = dude_config(20);
  cfg.checkpoint_every = 5;
  const TrainResult r = train(tr, va, tiny_config(), cfg, dir.path());
  ASSERT_EQ(r.log.size(), 4u);
  EXPECT_EQ(r.iterations_done, 20u);
  std::ifstream in(dir / "train_log.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iteration,train_loss,val_auroc,mu,sigma,wall_time");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
  }
  EXPECT_EQ(rows, 4u);
  const Checkpoint latest = load_checkpoint(dir / "latest.ckpt");
  EXPECT_EQ(latest.params, r.params);
  EXPECT_EQ(latest.iteration, 20u);
  const Checkpoint best = load_checkpoint(dir / "best.ckpt");
  EXPECT_EQ(best.params, r.best_params);
  EXPECT_EQ(best.config, tiny_config());
}

TEST(TrainTest, NonFiniteParametersRaiseNumericFailure) {
  const auto data = synthetic_samples(8, 8);
  ModelParams p = ModelParams::initialize(tiny_config(), 8);
  p.fc_biases.back()[0] = std::numeric_limits<Real>::quiet_NaN();
  EXPECT_THROW(train(data, {}, tiny_config(), dude_config(3), {}, &p),
               NumericFailure);
}

TEST(TrainTest, MissingCategoryIsReported) {
  auto data = synthetic_samples(8, 9);
  for (auto &s: data)
    s.category = Category::kDudeActive;
  EXPECT_THROW(train(data, {}, tiny_config(), dude_config(1)),
               std::invalid_argument);
}

TEST(SplitTest, ProteinsDisjoint) {
  const auto data = synthetic_samples(40, 10);
  std::vector<GraphSample> tr, va;
  split_by_protein(data, 0.3, 4, tr, va);
  EXPECT_EQ(tr.size() + va.size(), data.size());
  EXPECT_FALSE(va.empty());
  std::set<std::string> a, b;
  for (const auto &s: tr)
    a.insert(s.protein_id);
  for (const auto &s: va)
    b.insert(s.protein_id);
  for (const auto &id: b)
    EXPECT_EQ(a.count(id), 0u) << id;
  EXPECT_EQ(b.size(), 2u);
}

TEST(ParallelForTest, CoversRangeAndRethrows) {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(50, 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto &h: hits)
    EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7)
                                throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

} // namespace
} // namespace dagat
