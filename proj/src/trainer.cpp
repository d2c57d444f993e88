//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/trainer.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "dagat/binary_io.h"
#include "dagat/checkpoint.h"
#include "dagat/metrics.h"
#include "dagat/ops.h"
#include "dagat/report.h"

namespace dagat {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

bool params_finite(const ModelParams &p) {
  for (const Matrix *m: p.tensors())
    if (!all_finite(*m))
      return false;
  return true;
}

double validation_auroc(const std::vector<GraphSample> &val,
                        const ModelParams &params, const ModelConfig &cfg,
                        std::size_t threads) {
  ScoredSet scored;
  const auto probs = predict_all(val, params, cfg, threads);
  for (std::size_t k = 0; k < val.size(); ++k)
    if (val[k].label)
      scored.push_back(ScoredItem { probs[k], *val[k].label, val[k].protein_id,
                                    val[k].complex_id, val[k].rmsd });
  try {
    return auroc(scored);
  } catch (const MetricError &) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

} // namespace

void TrainConfig::validate() const {
  if (categories.empty())
    throw std::invalid_argument("at least one training category is required");
  if (batch_size == 0 || batch_size % categories.size() != 0)
    throw std::invalid_argument("batch size " + std::to_string(batch_size)
                                + " is not divisible by "
                                + std::to_string(categories.size())
                                + " categories");
  if (!(learning_rate > 0))
    throw std::invalid_argument("learning rate must be positive");
  if (checkpoint_every == 0)
    throw std::invalid_argument("checkpoint interval must be positive");
}

double bce(double probability, int label) {
  if (label != 0 && label != 1)
    throw std::invalid_argument("bce: label must be 0 or 1");
  const double p =
      std::clamp(probability, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

Var bce_loss(Var probability, int label) {
  const Matrix &pv = probability.value();
  if (pv.rows() != 1 || pv.cols() != 1)
    throw ShapeError("bce_loss: probability must be 1x1");
  const double p = static_cast<double>(pv.item());
  const Real value = static_cast<Real>(bce(p, label));
  return probability.tape().record(
      Matrix::scalar(value), { probability },
      [ip = probability.id(), label, p](Tape &t, std::size_t self) {
        const Real g = t.grad_buffer(self)[0];
        if (p < kProbabilityClamp || p > 1.0 - kProbabilityClamp)
          return; // flat inside the clamp
        const double d = label == 1 ? -1.0 / p : 1.0 / (1.0 - p);
        t.grad_buffer(ip)[0] += g * static_cast<Real>(d);
      });
}

CategoryPools make_pools(const std::vector<GraphSample> &samples,
                         const std::vector<Category> &categories) {
  CategoryPools pools;
  for (Category c: categories)
    pools[c];
  for (std::size_t k = 0; k < samples.size(); ++k) {
    auto it = pools.find(samples[k].category);
    if (it != pools.end() && samples[k].label)
      it->second.push_back(k);
  }
  return pools;
}

BalancedBatchSampler::BalancedBatchSampler(CategoryPools pools,
                                           std::vector<Category> categories,
                                           std::size_t batch_size,
                                           std::uint64_t seed)
    : pools_(std::move(pools)), categories_(std::move(categories)),
      rng_(seed) {
  if (categories_.empty() || batch_size % categories_.size() != 0)
    throw std::invalid_argument("batch size must divide evenly across "
                                "categories");
  per_category_ = batch_size / categories_.size();
  for (Category c: categories_) {
    auto it = pools_.find(c);
    if (it == pools_.end() || it->second.empty())
      throw std::invalid_argument("training pool '"
                                  + std::string(category_name(c))
                                  + "' is empty");
  }
}

std::vector<std::size_t> BalancedBatchSampler::next() {
  std::vector<std::size_t> batch;
  batch.reserve(per_category_ * categories_.size());
  for (Category c: categories_) {
    const auto &pool = pools_.at(c);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t k = 0; k < per_category_; ++k)
      batch.push_back(pool[pick(rng_)]);
  }
  return batch;
}

Adam::Adam(const ModelParams &shape, double learning_rate, double beta1,
           double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  for (const Matrix *m: shape.tensors()) {
    m_.emplace_back(m->rows(), m->cols());
    v_.emplace_back(m->rows(), m->cols());
  }
}

void Adam::step(ModelParams &params, const std::vector<Matrix> &grads) {
  auto tensors = params.tensors();
  if (grads.size() != tensors.size() || m_.size() != tensors.size())
    throw ShapeError("Adam: gradient list does not match parameters");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    Matrix &p = *tensors[k];
    const Matrix &g = grads[k];
    require_same_shape(p, g, "Adam");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = static_cast<double>(g[i]);
      const double m = beta1_ * m_[k][i] + (1 - beta1_) * gi;
      const double v = beta2_ * v_[k][i] + (1 - beta2_) * gi * gi;
      m_[k][i] = static_cast<Real>(m);
      v_[k][i] = static_cast<Real>(v);
      p[i] -= static_cast<Real>(lr_ * (m / c1) / (std::sqrt(v / c2) + eps_));
    }
  }
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)> &fn) {
  const std::size_t workers = std::min(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next { 0 };
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error)
            error = std::current_exception();
        }
      }
    });
  for (auto &t: pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
}

BatchGradient batch_gradient(std::span<const GraphSample *const> batch,
                             const ModelParams &params, const ModelConfig &cfg,
                             bool training, std::uint64_t dropout_seed,
                             std::size_t threads) {
  if (batch.empty())
    throw std::invalid_argument("batch_gradient: empty batch");
  const std::size_t b = batch.size();
  const Real inv_b = static_cast<Real>(1.0 / static_cast<double>(b));
  std::vector<std::vector<Matrix>> per_sample(b);
  std::vector<double> losses(b);
  BatchGradient out;
  out.probability.resize(b);

  parallel_for(b, threads, [&](std::size_t k) {
    const GraphSample &s = *batch[k];
    if (!s.label)
      throw std::invalid_argument("sample '" + s.complex_id
                                  + "' has no label");
    Tape tape;
    const ParamVars vars = bind_params(tape, params, true);
    std::mt19937_64 rng(splitmix64(dropout_seed ^ splitmix64(k)));
    const Forward fw = forward(tape, s, vars, cfg, training ? &rng : nullptr);
    const Var loss = bce_loss(fw.probability, *s.label);
    tape.backward(ops::scale(loss, inv_b));
    out.probability[k] = static_cast<double>(fw.probability.value().item());
    losses[k] = static_cast<double>(loss.value().item());
    for (const Var &v: vars.all())
      per_sample[k].push_back(tape.grad(v));
  });

  out.grads = std::move(per_sample[0]);
  for (std::size_t k = 1; k < b; ++k)
    for (std::size_t t = 0; t < out.grads.size(); ++t)
      out.grads[t] += per_sample[k][t];
  double total = 0;
  for (double l: losses)
    total += l;
  out.loss = total / static_cast<double>(b);
  return out;
}

std::vector<double> predict_all(const std::vector<GraphSample> &samples,
                                 const ModelParams &params,
                                 const ModelConfig &cfg, std::size_t threads) {
  std::vector<double> out(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t k) {
    out[k] = predict(samples[k], params, cfg);
  });
  return out;
}

std::string train_log_csv(const std::vector<TrainLogRow> &rows) {
  std::ostringstream out;
  out << "iteration,train_loss,val_auroc,mu,sigma,wall_time\n";
  for (const TrainLogRow &r: rows) {
    out << r.iteration << ',' << format_double(r.train_loss) << ',';
    if (std::isfinite(r.val_auroc))
      out << format_double(r.val_auroc);
    out << ',' << format_double(r.mu) << ',' << format_double(r.sigma) << ','
        << format_double(r.wall_time) << '\n';
  }
  return out.str();
}

TrainResult train(const std::vector<GraphSample> &train_data,
                  const std::vector<GraphSample> &val_data,
                  const ModelConfig &model_cfg, const TrainConfig &train_cfg,
                  const std::filesystem::path &out_dir,
                  const ModelParams *initial) {
  model_cfg.validate();
  train_cfg.validate();
  BalancedBatchSampler sampler(make_pools(train_data, train_cfg.categories),
                               train_cfg.categories, train_cfg.batch_size,
                               train_cfg.seed);

  TrainResult result;
  result.params = initial ? *initial
                          : ModelParams::initialize(model_cfg, train_cfg.seed);
  result.params.check_shapes(model_cfg);
  result.best_params = result.params;
  result.best_val_auroc = -std::numeric_limits<double>::infinity();
  const std::size_t param_count = result.params.num_scalars();
  Adam adam(result.params, train_cfg.learning_rate, train_cfg.beta1,
            train_cfg.beta2, train_cfg.epsilon);

  const auto start = std::chrono::steady_clock::now();
  double window_loss = 0;
  std::size_t window_count = 0;
  std::vector<const GraphSample *> batch;

  for (std::uint64_t it = 1; it <= train_cfg.iterations; ++it) {
    batch.clear();
    for (std::size_t idx: sampler.next())
      batch.push_back(&train_data[idx]);

    BatchGradient bg;
    try {
      bg = batch_gradient(batch, result.params, model_cfg, true,
                          splitmix64(train_cfg.seed ^ splitmix64(it)),
                          train_cfg.threads);
    } catch (const std::domain_error &e) {
      throw NumericFailure("iteration " + std::to_string(it) + ": "
                           + e.what());
    }
    if (!std::isfinite(bg.loss))
      throw NumericFailure("iteration " + std::to_string(it)
                           + ": non-finite loss");
    adam.step(result.params, bg.grads);
    if (!params_finite(result.params))
      throw NumericFailure("iteration " + std::to_string(it)
                           + ": non-finite parameters after update");
    if (result.params.num_scalars() != param_count)
      throw std::logic_error("parameter count changed during training");
    result.iterations_done = it;
    window_loss += bg.loss;
    ++window_count;

    if (it % train_cfg.checkpoint_every != 0 && it != train_cfg.iterations)
      continue;

    TrainLogRow row;
    row.iteration = it;
    row.train_loss = window_loss / static_cast<double>(window_count);
    row.val_auroc =
        val_data.empty()
            ? std::numeric_limits<double>::quiet_NaN()
            : validation_auroc(val_data, result.params, model_cfg,
                               train_cfg.threads);
    row.mu = result.params.mu_value();
    row.sigma = result.params.sigma();
    row.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    result.log.push_back(row);
    window_loss = 0;
    window_count = 0;

    // Without a usable validation score the latest parameters count as best.
    const bool improved = !std::isfinite(row.val_auroc)
                          || row.val_auroc > result.best_val_auroc;
    if (improved) {
      result.best_params = result.params;
      if (std::isfinite(row.val_auroc))
        result.best_val_auroc = row.val_auroc;
    }
    if (!out_dir.empty()) {
      save_checkpoint(out_dir / "latest.ckpt",
                      Checkpoint { model_cfg, result.params, it });
      if (improved)
        save_checkpoint(out_dir / "best.ckpt",
                        Checkpoint { model_cfg, result.params, it });
      atomic_write_file(out_dir / "train_log.csv", train_log_csv(result.log));
    }
  }
  return result;
}

void split_by_protein(const std::vector<GraphSample> &all, double fraction,
                      std::uint64_t seed, std::vector<GraphSample> &train,
                      std::vector<GraphSample> &validation) {
  std::set<std::string> unique;
  for (const GraphSample &s: all)
    unique.insert(s.protein_id);
  std::vector<std::string> proteins(unique.begin(), unique.end());
  std::mt19937_64 rng(seed);
  std::shuffle(proteins.begin(), proteins.end(), rng);
  std::size_t n_val = 0;
  if (proteins.size() >= 2 && fraction > 0)
    n_val = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(fraction * proteins.size())), 1,
        proteins.size() - 1);
  const std::set<std::string> held(proteins.begin(),
                                   proteins.begin() + static_cast<long>(n_val));
  train.clear();
  validation.clear();
  for (const GraphSample &s: all)
    (held.count(s.protein_id) ? validation : train).push_back(s);
}

} // namespace dagat
