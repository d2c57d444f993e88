//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_TRAINER_H_
#define DAGAT_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dagat/chem.h"
#include "dagat/graph.h"
#include "dagat/model.h"
#include "dagat/tape.h"

namespace dagat {

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t iterations = 150000;
  double learning_rate = 1e-4;
  std::uint64_t seed = 0;
  // Categories drawn in equal shares per batch.
  std::vector<Category> categories { kTrainingCategories.begin(),
                                     kTrainingCategories.end() };
  std::size_t checkpoint_every = 1000;
  std::size_t threads = 1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  // Throws std::invalid_argument; batch_size must divide evenly across
  // categories.
  void validate() const;
};

class NumericFailure: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kProbabilityClamp = 1e-12;

// -[y log p + (1 - y) log(1 - p)] with p clamped to [1e-12, 1 - 1e-12].
double bce(double probability, int label);
Var bce_loss(Var probability, int label);

// Sample indices per category (only labelled samples of the requested
// categories).
using CategoryPools = std::map<Category, std::vector<std::size_t>>;

CategoryPools make_pools(const std::vector<GraphSample> &samples,
                         const std::vector<Category> &categories);

// Endless stream of batches with batch_size / |categories| draws from each
// pool, uniform with replacement. Batches list categories in the order given.
class BalancedBatchSampler {
public:
  // Throws std::invalid_argument naming the first empty pool.
  BalancedBatchSampler(CategoryPools pools, std::vector<Category> categories,
                       std::size_t batch_size, std::uint64_t seed);

  std::vector<std::size_t> next();

private:
  CategoryPools pools_;
  std::vector<Category> categories_;
  std::size_t per_category_;
  std::mt19937_64 rng_;
};

class Adam {
public:
  Adam(const ModelParams &shape, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double epsilon = 1e-8);

  // `grads` aligned with ModelParams::tensors().
  void step(ModelParams &params, const std::vector<Matrix> &grads);
  std::uint64_t steps() const { return t_; }

private:
  double lr_, beta1_, beta2_, eps_;
  std::uint64_t t_ = 0;
  std::vector<Matrix> m_, v_;
};

struct BatchGradient {
  double loss = 0;                 // mean BCE over the batch
  std::vector<double> probability; // per sample
  std::vector<Matrix> grads;       // d(mean loss)/d(param), tensors() order
};

// Per-sample tapes, optionally spread over `threads` workers; gradients are
// reduced in batch order so the result does not depend on the thread count.
// Dropout is on iff `training`; sample k of the batch draws its mask from
// a stream seeded by (dropout_seed, k).
BatchGradient batch_gradient(std::span<const GraphSample *const> batch,
                             const ModelParams &params, const ModelConfig &cfg,
                             bool training, std::uint64_t dropout_seed,
                             std::size_t threads = 1);

// Inference-mode probabilities for every sample.
std::vector<double> predict_all(const std::vector<GraphSample> &samples,
                                 const ModelParams &params,
                                 const ModelConfig &cfg,
                                 std::size_t threads = 1);

// Runs fn(i) for i in [0, n) over up to `threads` threads.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)> &fn);

struct TrainLogRow {
  std::uint64_t iteration = 0;
  double train_loss = 0; // mean batch loss since the previous row
  double val_auroc = 0;  // NaN when unavailable
  double mu = 0;
  double sigma = 0;
  double wall_time = 0; // seconds since training started
};

std::string train_log_csv(const std::vector<TrainLogRow> &rows);

struct TrainResult {
  ModelParams params;      // after the last completed iteration
  ModelParams best_params; // best validation AUROC (or latest)
  double best_val_auroc = 0;
  std::uint64_t iterations_done = 0;
  std::vector<TrainLogRow> log;
};

// Trains with Adam on balanced batches. When `out_dir` is non-empty it
// receives train_log.csv, latest.ckpt and best.ckpt at every checkpoint
// interval and at the end. A non-finite loss or parameter throws
// NumericFailure; files on disk then reflect the last good checkpoint.
TrainResult train(const std::vector<GraphSample> &train_data,
                  const std::vector<GraphSample> &val_data,
                  const ModelConfig &model_cfg, const TrainConfig &train_cfg,
                  const std::filesystem::path &out_dir = {},
                  const ModelParams *initial = nullptr);

// Splits by protein_id so no protein lands on both sides; roughly
// `fraction` of the distinct proteins (at least one when there are two or
// more) go to validation.
void split_by_protein(const std::vector<GraphSample> &all, double fraction,
                      std::uint64_t seed, std::vector<GraphSample> &train,
                      std::vector<GraphSample> &validation);

} // namespace dagat

#endif // DAGAT_TRAINER_H_
