//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. `acceptance A2 A5` runs a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "dagat/checkpoint.h"
#include "dagat/gat_layer.h"
#include "dagat/graph.h"
#include "dagat/metrics.h"
#include "dagat/model.h"
#include "dagat/ops.h"
#include "dagat/synthetic.h"
#include "dagat/trainer.h"
#include "test_util.h"

namespace dagat {
namespace {

namespace fs = std::filesystem;
using test::check_gradients;
using test::random_matrix;

// Collects the failed checks of one criterion.
class Checker {
public:
  void expect(bool ok, const std::string &what) {
    if (!ok)
      failures_.push_back(what);
  }
  void note(const std::string &s) { notes_.push_back(s); }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::string out;
    for (const auto &f: failures_)
      out += (out.empty() ? "" : "; ") + f;
    for (const auto &n: notes_)
      out += (out.empty() ? "" : "; ") + n;
    return out;
  }

private:
  std::vector<std::string> failures_, notes_;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t)
      .count();
}

std::vector<GraphSample> synthetic_samples(const SyntheticOptions &opts) {
  std::vector<GraphSample> out;
  for (const ComplexRecord &r: generate_synthetic(opts))
    out.push_back(build_sample(prune_protein(r)));
  return out;
}

ModelConfig reduced_config() {
  ModelConfig cfg;
  cfg.gat_dim = 32;
  cfg.fc_dims = { 32, 32, 1 };
  return cfg;
}

// ---------------------------------------------------------------------------

void gradient_suite(Checker &c) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  double worst = 0;
  auto check = [&](const std::string &name, const test::LossBuilder &f,
                   std::vector<Matrix> inputs) {
    const auto r = check_gradients(f, std::move(inputs), 1e-5);
    worst = std::max(worst, r.worst);
    c.expect(r.worst < 1e-4, name + " rel err " + fmt(r.worst));
  };
  std::map<std::size_t, Matrix> weights;
  auto contract = [&](Var y) {
    auto it = weights.find(y.rows() * 1000 + y.cols());
    if (it == weights.end())
      it = weights
               .emplace(y.rows() * 1000 + y.cols(),
                        random_matrix(y.rows(), y.cols(), rng))
               .first;
    return ops::sum(ops::mul_const(y, it->second));
  };
  auto unary = [&](const std::string &name, std::function<Var(Var)> op) {
    check(name,
          [&](Tape &, const std::vector<Var> &v) { return contract(op(v[0])); },
          { random_matrix(3, 4, rng) });
  };
  auto binary = [&](const std::string &name, std::function<Var(Var, Var)> op,
                    Matrix a, Matrix b) {
    check(name,
          [&](Tape &, const std::vector<Var> &v) {
            return contract(op(v[0], v[1]));
          },
          { std::move(a), std::move(b) });
  };
  binary("matmul", ops::matmul, random_matrix(3, 4, rng),
         random_matrix(4, 2, rng));
  binary("matmul_nt", ops::matmul_nt, random_matrix(3, 4, rng),
         random_matrix(5, 4, rng));
  binary("add", ops::add, random_matrix(3, 4, rng), random_matrix(3, 4, rng));
  binary("sub", ops::sub, random_matrix(3, 4, rng), random_matrix(3, 4, rng));
  binary("mul", ops::mul, random_matrix(3, 4, rng), random_matrix(3, 4, rng));
  binary("add_row", ops::add_row, random_matrix(4, 3, rng),
         random_matrix(1, 3, rng));
  binary("scale_rows", ops::scale_rows, random_matrix(4, 1, rng),
         random_matrix(4, 3, rng));
  binary("concat_cols", ops::concat_cols, random_matrix(4, 3, rng),
         random_matrix(4, 2, rng));
  unary("transpose", ops::transpose);
  unary("exp", ops::exp);
  unary("sigmoid", ops::sigmoid);
  unary("relu", ops::relu);
  unary("softplus", ops::softplus);
  unary("scale", [](Var x) { return ops::scale(x, -2.5); });
  unary("add_scalar", [](Var x) { return ops::add_scalar(x, 0.75); });
  unary("sum_rows", ops::sum_rows);
  unary("sum", ops::sum);
  const Matrix cm = random_matrix(3, 4, rng);
  unary("mul_const", [&](Var x) { return ops::mul_const(x, cm); });
  unary("add_const", [&](Var x) { return ops::add_const(x, cm); });
  const Matrix mask = Matrix::from_rows(
      { { 1, 1, 0, 1 }, { 0, 1, 0, 0 }, { 1, 0, 1, 1 }, { 1, 1, 1, 1 } });
  check("masked_softmax",
        [&](Tape &, const std::vector<Var> &v) {
          return contract(ops::masked_softmax(v[0], mask));
        },
        { random_matrix(4, 4, rng) });
  for (int y: { 0, 1 })
    check("bce_loss y=" + std::to_string(y),
          [y](Tape &, const std::vector<Var> &v) {
            return bce_loss(ops::sigmoid(v[0]), y);
          },
          { Matrix::scalar(0.4) });

  // One attention layer, including the adjacency entries.
  {
    const std::size_t n = 5, f = 3;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      a(i, i) = 1;
      if (i + 1 < n)
        a(i, i + 1) = a(i + 1, i) = 0.4 + 0.1 * static_cast<double>(i);
    }
    const Matrix amask = a;
    check("gat_layer",
          [&](Tape &, const std::vector<Var> &v) {
            const GatOutput o = gat_forward(v[0], ops::mul_const(v[1], amask),
                                            GatVars { v[2], v[3], v[4], v[5] });
            return contract(o.out);
          },
          { random_matrix(n, f, rng), a, random_matrix(f, f, rng),
            random_matrix(f, f, rng), random_matrix(2 * f, 1, rng),
            random_matrix(1, 1, rng) });
  }

  // Contact adjacency with respect to mu and sigma.
  {
    const GraphSample s = test::toy_sample(3, 5, 17);
    check("contact_adjacency",
          [&](Tape &, const std::vector<Var> &v) {
            return contract(materialize_a2(s, v[0], v[1]));
          },
          { Matrix::scalar(3.2), Matrix::scalar(1.7) });
  }

  // Full model on a complex of at most 8 atoms.
  {
    const ModelConfig cfg = test::tiny_config();
    const GraphSample s = test::toy_sample(3, 5, 17);
    c.expect(s.num_atoms() <= 8, "model fixture too large");
    c.expect(s.num_contacts() > 0, "model fixture has no contacts");
    ModelParams p = ModelParams::initialize(cfg, 18);
    for (Matrix &b: p.fc_biases)
      for (Real &v: b.data())
        v = 0.05;
    for (GatParams &l: p.layers)
      l.gate_bias = Matrix::scalar(0.1);
    double mean_d = 0, cnt = 0;
    for (std::size_t i = 0; i < s.num_atoms(); ++i)
      for (std::size_t j = 0; j < s.num_atoms(); ++j)
        if (s.inter_mask(i, j) != 0) {
          mean_d += s.dist(i, j);
          cnt += 1;
        }
    p.mu = Matrix::scalar(mean_d / cnt - 0.3);
    std::vector<Matrix> inputs;
    for (const Matrix *m: p.tensors())
      inputs.push_back(*m);
    auto to_vars = [&](const std::vector<Var> &v) {
      ParamVars pv;
      std::size_t k = 0;
      pv.embed = v[k++];
      for (std::size_t l = 0; l < cfg.num_gat_layers; ++l, k += 4)
        pv.layers.push_back(GatVars { v[k], v[k + 1], v[k + 2], v[k + 3] });
      pv.mu = v[k++];
      pv.sigma_raw = v[k++];
      for (std::size_t l = 0; l < cfg.fc_dims.size(); ++l) {
        pv.fc_weights.push_back(v[k++]);
        pv.fc_biases.push_back(v[k++]);
      }
      return pv;
    };
    check("full_model",
          [&](Tape &tape, const std::vector<Var> &v) {
            return bce_loss(forward(tape, s, to_vars(v), cfg).probability, 1);
          },
          inputs);
    // The mu and sigma entries in isolation, so a large error elsewhere
    // cannot mask them.
    const std::size_t mu_idx = 1 + 4 * cfg.num_gat_layers;
    for (std::size_t which: { mu_idx, mu_idx + 1 }) {
      const auto r = check_gradients(
          [&](Tape &tape, const std::vector<Var> &v) {
            std::vector<Var> all;
            for (std::size_t k = 0; k < inputs.size(); ++k)
              all.push_back(k == which ? v[0] : tape.constant(inputs[k]));
            return forward(tape, s, to_vars(all), cfg).logit;
          },
          { inputs[which] });
      c.expect(r.worst < 1e-4, (which == mu_idx ? "mu" : "sigma")
                                   + std::string(" rel err ") + fmt(r.worst));
      c.expect(r.analytic != 0, "zero gradient for mu/sigma");
      worst = std::max(worst, r.worst);
    }
  }
  const double secs = seconds_since(start);
  c.expect(secs < 60, "runtime " + fmt(secs) + " s");
  c.note("worst rel err " + fmt(worst) + ", " + fmt(secs) + " s");
}

// ---------------------------------------------------------------------------

void learnability(Checker &c) {
  const auto start = std::chrono::steady_clock::now();
  SyntheticOptions opts;
  opts.count = 2000;
  opts.seed = 1;
  opts.id_prefix = "train";
  const auto train_data = synthetic_samples(opts);
  opts.count = 500;
  opts.seed = 2;
  opts.id_prefix = "test";
  const auto test_data = synthetic_samples(opts);

  std::vector<GraphSample> fit, val;
  split_by_protein(train_data, 0.1, 3, fit, val);
  TrainConfig tc;
  tc.categories = { Category::kDudeActive, Category::kDudeInactive };
  tc.batch_size = 32;
  tc.iterations = 2500;
  tc.learning_rate = 1e-3;
  tc.seed = 3;
  tc.checkpoint_every = 250;
  const ModelConfig cfg = reduced_config();
  const TrainResult r = train(fit, val, cfg, tc);

  const auto probs = predict_all(test_data, r.best_params, cfg);
  ScoredSet scored;
  for (std::size_t k = 0; k < test_data.size(); ++k)
    scored.push_back(ScoredItem { probs[k], *test_data[k].label, "p",
                                  test_data[k].complex_id, {} });
  const double a = auroc(scored);
  const double secs = seconds_since(start);
  c.expect(a >= 0.90, "test AUROC " + fmt(a));
  c.expect(secs < 15 * 60, "runtime " + fmt(secs) + " s");
  c.note("test AUROC " + fmt(a) + " (best validation AUROC "
         + fmt(r.best_val_auroc) + "), mu " + fmt(r.best_params.mu_value())
         + ", sigma " + fmt(r.best_params.sigma()) + ", " + fmt(secs) + " s");
}

// ---------------------------------------------------------------------------

void overfit(Checker &c) {
  const auto start = std::chrono::steady_clock::now();
  SyntheticOptions opts;
  opts.count = 32;
  opts.seed = 11;
  const auto data = synthetic_samples(opts);
  std::vector<const GraphSample *> batch;
  for (const auto &s: data)
    batch.push_back(&s);
  const ModelConfig cfg;
  ModelParams p = ModelParams::initialize(cfg, 11);
  Adam adam(p, 1e-3);
  double loss = batch_gradient(batch, p, cfg, false, 0).loss;
  std::size_t it = 0;
  for (; it < 2000 && !(loss < 0.05); ++it) {
    const BatchGradient g = batch_gradient(batch, p, cfg, true, it);
    adam.step(p, g.grads);
    if ((it + 1) % 50 == 0)
      loss = batch_gradient(batch, p, cfg, false, 0).loss;
  }
  loss = batch_gradient(batch, p, cfg, false, 0).loss;
  c.expect(loss < 0.05, "mean BCE " + fmt(loss) + " after " + std::to_string(it)
                            + " iterations");
  c.note("mean BCE " + fmt(loss) + " at iteration " + std::to_string(it) + ", "
         + fmt(seconds_since(start)) + " s");
}

// ---------------------------------------------------------------------------

GraphSample permuted(const GraphSample &s, const std::vector<std::size_t> &perm) {
  GraphSample t = s;
  const std::size_t n = s.num_atoms();
  for (std::size_t i = 0; i < n; ++i) {
    t.is_ligand[i] = s.is_ligand[perm[i]];
    for (std::size_t k = 0; k < s.features.cols(); ++k)
      t.features(i, k) = s.features(perm[i], k);
    for (std::size_t j = 0; j < n; ++j) {
      t.a1(i, j) = s.a1(perm[i], perm[j]);
      t.dist(i, j) = s.dist(perm[i], perm[j]);
      t.inter_mask(i, j) = s.inter_mask(perm[i], perm[j]);
    }
  }
  return t;
}

void invariance(Checker &c) {
  const auto start = std::chrono::steady_clock::now();
  const ModelConfig cfg = test::tiny_config();
  double worst_perm = 0, worst_rigid = 0, worst_row = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ModelParams p = ModelParams::initialize(cfg, seed);
    const ComplexRecord rec = test::toy_complex(6 + seed, 20 + 2 * seed, seed);
    const GraphSample s = build_sample(rec);

    std::vector<std::size_t> perm(s.num_atoms());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    worst_perm = std::max(worst_perm, std::abs(predict(s, p, cfg)
                                               - predict(permuted(s, perm), p,
                                                         cfg)));

    ComplexRecord moved = rec;
    const double th = 0.7 * static_cast<double>(seed), ph = -0.3;
    for (Atom &a: moved.atoms) {
      auto [x, y, z] = a.position;
      const double x1 = std::cos(th) * x - std::sin(th) * y;
      const double y1 = std::sin(th) * x + std::cos(th) * y;
      a.position = { x1 + 4.0, std::cos(ph) * y1 - std::sin(ph) * z - 9.5,
                     std::sin(ph) * y1 + std::cos(ph) * z + 2.25 };
    }
    const GraphSample m = build_sample(moved);
    worst_rigid = std::max(worst_rigid,
                           std::abs(predict(s, p, cfg) - predict(m, p, cfg)));

    // Structural invariants of A1 and A2.
    try {
      check_sample_invariants(s);
    } catch (const std::exception &e) {
      c.expect(false, e.what());
    }
    Tape tape;
    const Forward fw = forward(tape, s, bind_params(tape, p, false), cfg);
    const Matrix &a2 = fw.a2.value();
    for (std::size_t i = 0; i < s.num_atoms(); ++i)
      for (std::size_t j = 0; j < s.num_atoms(); ++j) {
        c.expect(a2(i, j) == a2(j, i), "A2 asymmetric");
        if (s.inter_mask(i, j) == 0)
          c.expect(a2(i, j) == s.a1(i, j), "A2 differs from A1 off contacts");
        else
          c.expect(a2(i, j) > 0 && a2(i, j) <= 1, "A2 contact weight range");
      }
    for (const auto *branch: { &fw.covalent, &fw.contact })
      for (const GatOutput &o: *branch) {
        for (std::size_t i = 0; i < s.num_atoms(); ++i) {
          const double z = o.gate.value()(i, 0);
          c.expect(z > 0 && z < 1, "gate outside (0, 1)");
          double row = 0;
          for (Real v: o.softmax.value().row(i))
            row += v;
          worst_row = std::max(worst_row, std::abs(row - 1));
        }
      }

    GraphSample none = s;
    none.inter_mask = Matrix(s.num_atoms(), s.num_atoms());
    Tape t2;
    const Forward f0 = forward(t2, none, bind_params(t2, p, false), cfg);
    c.expect(f0.pooled.value() == Matrix(1, cfg.gat_dim),
             "no-contact pooled vector not exactly zero");
  }
  c.expect(worst_perm <= 1e-10, "permutation diff " + fmt(worst_perm));
  c.expect(worst_rigid <= 1e-9, "rigid-motion diff " + fmt(worst_rigid));
  c.expect(worst_row <= 1e-12, "softmax row sum err " + fmt(worst_row));
  const double secs = seconds_since(start);
  c.expect(secs < 60, "runtime " + fmt(secs) + " s");
  c.note("perm " + fmt(worst_perm) + ", rigid " + fmt(worst_rigid)
         + ", row sum " + fmt(worst_row));
}

// ---------------------------------------------------------------------------

ScoredSet random_scores(std::size_t pos, std::size_t neg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  ScoredSet s;
  for (std::size_t i = 0; i < pos + neg; ++i)
    s.push_back(ScoredItem { u(rng), i < pos ? 1 : 0, "p",
                             std::to_string(i), {} });
  return s;
}

void metric_oracles(Checker &c) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> level(0, 40);
    std::bernoulli_distribution coin(0.3);
    ScoredSet s;
    for (int i = 0; i < 200; ++i)
      s.push_back(ScoredItem { level(rng) / 8.0, coin(rng) ? 1 : 0, "p",
                               std::to_string(i), {} });
    double wins = 0, pairs = 0;
    for (const auto &a: s)
      for (const auto &b: s)
        if (a.label == 1 && b.label == 0) {
          pairs += 1;
          wins += a.score > b.score ? 1 : a.score == b.score ? 0.5 : 0;
        }
    c.expect(auroc(s) == wins / pairs,
             "AUROC differs from pair count, seed " + std::to_string(seed));
  }

  double rand_sum = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    rand_sum += adjusted_logauc(random_scores(4000, 40000, 100 + seed));
  const double rand_mean = rand_sum / 5;
  c.expect(std::abs(rand_mean) <= 0.01, "random LogAUC " + fmt(rand_mean));
  ScoredSet perfect;
  for (int i = 0; i < 2000; ++i)
    perfect.push_back(ScoredItem { static_cast<double>(i), i >= 1900 ? 1 : 0,
                                   "p", std::to_string(i), {} });
  const double perf = adjusted_logauc(perfect, 0.001);
  c.expect(std::abs(perf - 0.85538) <= 0.005, "perfect LogAUC " + fmt(perf));

  ScoredSet re;
  for (int i = 0; i < 110; ++i)
    re.push_back(ScoredItem { -static_cast<double>(i),
                              i < 5 || (i >= 6 && i < 11) ? 1 : 0, "p",
                              std::to_string(i), {} });
  const double re_val = re_score(re, 0.01);
  c.expect(re_val == 50.0, "RE " + fmt(re_val));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> count(1, 8);
    std::uniform_real_distribution<double> u(0, 1), rmsd(0, 6);
    ScoredSet poses;
    std::map<std::string, std::vector<std::pair<double, double>>> groups;
    for (int k = 0; k < 20; ++k) {
      const std::string id = "c" + std::to_string(k);
      for (int m = count(rng); m > 0; --m) {
        const double sc = u(rng), r = rmsd(rng);
        poses.push_back(ScoredItem { sc, 0, "p", id, r });
        groups[id].push_back({ sc, r });
      }
    }
    for (std::size_t n: { 1, 2, 3, 5, 10 }) {
      int hits = 0;
      for (auto &[id, g]: groups) {
        std::sort(g.begin(), g.end(), std::greater<>());
        for (std::size_t k = 0; k < std::min(n, g.size()); ++k)
          if (g[k].second < 2.0) {
            ++hits;
            break;
          }
      }
      c.expect(topn_success(poses, n) == hits / 20.0,
               "top-" + std::to_string(n) + " mismatch");
    }
  }
  c.note("random LogAUC " + fmt(rand_mean) + ", perfect " + fmt(perf)
         + ", RE " + fmt(re_val));
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// The log minus its wall-clock column.
std::string log_without_time(const fs::path &p) {
  std::istringstream in(slurp(p));
  std::string out;
  for (std::string line; std::getline(in, line);)
    out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

void pipeline_determinism(Checker &c) {
  test::TempDir dir;
  SyntheticOptions opts;
  opts.count = 40;
  opts.seed = 21;
  opts.num_proteins = 4;
  std::string corpus;
  for (const ComplexRecord &r: generate_synthetic(opts))
    corpus += to_json_line(r) + "\n";
  {
    std::ofstream out(dir / "corpus.jsonl");
    out << corpus;
  }
  std::ostringstream sink;
  auto run = [&](const std::string &tag) {
    const fs::path d = dir / tag;
    const std::vector<std::vector<std::string>> steps {
      { "featurize", "--input", (dir / "corpus.jsonl").string(), "--out",
        (d / "samples.cache").string() },
      { "train", "--cache", (d / "samples.cache").string(), "--out-dir",
        (d / "run").string(), "--screening-only", "--iterations", "100",
        "--batch-size", "8", "--checkpoint-every", "50", "--seed", "5",
        "--val-fraction", "0.25", "--gat-dim", "16", "--fc-dims", "16,8,1" },
      { "evaluate", "--cache", (d / "samples.cache").string(), "--checkpoint",
        (d / "run/best.ckpt").string(), "--out-dir", (d / "eval").string() },
    };
    for (const auto &args: steps) {
      const int code = cli::run(args, sink, sink);
      c.expect(code == 0, tag + ": " + args[0] + " exited " + std::to_string(code));
    }
  };
  run("a");
  run("b");
  for (const char *f: { "samples.cache", "run/latest.ckpt", "run/best.ckpt",
                        "eval/report.json", "eval/report.csv", "eval/roc.csv",
                        "eval/pr.csv" }) {
    const std::string a = slurp(dir / "a" / f);
    c.expect(!a.empty(), std::string(f) + " missing");
    c.expect(a == slurp(dir / "b" / f), std::string(f) + " differs");
  }
  c.expect(log_without_time(dir / "a/run/train_log.csv")
               == log_without_time(dir / "b/run/train_log.csv"),
           "train_log.csv differs");
  c.note("cache, checkpoints, log and reports identical");
}

// ---------------------------------------------------------------------------

double dist3(const Vec3 &a, const Vec3 &b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1])
                   + (a[2] - b[2]) * (a[2] - b[2]));
}

Atom make_atom(Element e, Vec3 p, bool ligand) {
  Atom a;
  a.element = e;
  a.position = p;
  a.is_ligand = ligand;
  return a;
}

void preprocessing_rules(Checker &c) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-11, 11), small(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexRecord r;
    r.complex_id = "rules" + std::to_string(trial);
    for (int k = 0; k < 4; ++k)
      r.atoms.push_back(make_atom(
          k % 2 ? Element::N : Element::C,
          { 1.5 * k + small(rng) / 10, small(rng), small(rng) }, true));
    for (int k = 0; k < 40; ++k)
      r.atoms.push_back(make_atom(Element::O, { u(rng), u(rng), u(rng) }, false));
    // Boundary atoms: exactly at the prune and contact cutoffs.
    r.atoms.push_back(make_atom(Element::C, { 0, 8.0, 0 }, false));
    r.atoms.push_back(make_atom(Element::C, { 0, -8.0 - 1e-9, 0 }, false));
    r.atoms.push_back(make_atom(Element::C, { 0, 0, 5.0 }, false));
    r.atoms.push_back(make_atom(Element::C, { 0, 0, -(5.0 - 1e-9) }, false));

    std::vector<Vec3> kept;
    for (const Atom &a: r.atoms) {
      if (a.is_ligand) {
        kept.push_back(a.position);
        continue;
      }
      double best = 1e9;
      for (const Atom &l: r.atoms)
        if (l.is_ligand)
          best = std::min(best, dist3(a.position, l.position));
      if (!(best > 8.0))
        kept.push_back(a.position);
    }
    const ComplexRecord pr = prune_protein(r);
    std::vector<Vec3> got;
    for (const Atom &a: pr.atoms)
      got.push_back(a.position);
    c.expect(got == kept, "prune mismatch in trial " + std::to_string(trial));

    const GraphSample s = build_sample(pr);
    for (std::size_t i = 0; i < pr.atoms.size(); ++i)
      for (std::size_t j = 0; j < pr.atoms.size(); ++j) {
        const bool contact = pr.atoms[i].is_ligand != pr.atoms[j].is_ligand
                             && dist3(pr.atoms[i].position,
                                      pr.atoms[j].position) < 5.0;
        c.expect((s.inter_mask(i, j) != 0) == contact,
                 "contact mask mismatch in trial " + std::to_string(trial));
      }
  }
  // Exactly 5.0 from atom 0 is not a contact; just inside is.
  {
    ComplexRecord r;
    r.complex_id = "edge";
    r.atoms = { make_atom(Element::C, { 0, 0, 0 }, true),
                make_atom(Element::O, { 0, 0, 5.0 }, false),
                make_atom(Element::O, { 0, 0, -4.999999 }, false) };
    const GraphSample s = build_sample(r);
    c.expect(s.inter_mask(0, 1) == 0, "d == 5 counted as contact");
    c.expect(s.inter_mask(0, 2) == 1, "d < 5 not counted as contact");
  }
  const std::vector<std::pair<double, PoseLabel>> cases {
    { 0.0, PoseLabel::kPositive },    { 1.999, PoseLabel::kPositive },
    { 2.0, PoseLabel::kOmitted },     { 3.0, PoseLabel::kOmitted },
    { 4.0, PoseLabel::kOmitted },     { 4.0001, PoseLabel::kNegative },
    { 12.0, PoseLabel::kNegative },
  };
  for (const auto &[rmsd, want]: cases)
    c.expect(label_pose(rmsd) == want, "label_pose(" + fmt(rmsd) + ")");
  for (int k = 0; k < 1000; ++k) {
    const double x = std::uniform_real_distribution<double>(0, 8)(rng);
    const PoseLabel want = x < 2 ? PoseLabel::kPositive
                           : x > 4 ? PoseLabel::kNegative
                                   : PoseLabel::kOmitted;
    c.expect(label_pose(x) == want, "label_pose(" + fmt(x) + ")");
  }
  c.note("pruning, contacts and pose labels match brute force");
}

struct Criterion {
  const char *id;
  const char *name;
  void (*fn)(Checker &);
};

const Criterion kCriteria[] = {
  { "A1", "gradient suite", gradient_suite },
  { "A2", "learnability", learnability },
  { "A3", "overfit sanity", overfit },
  { "A4", "invariance suite", invariance },
  { "A5", "metric oracles", metric_oracles },
  { "A6", "pipeline determinism", pipeline_determinism },
  { "A7", "preprocessing rules", preprocessing_rules },
};

} // namespace
} // namespace dagat

int main(int argc, char **argv) {
  std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto &crit: dagat::kCriteria) {
    if (!only.empty() && !only.count(crit.id))
      continue;
    dagat::Checker c;
    try {
      crit.fn(c);
    } catch (const std::exception &e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    failed += !c.ok();
    std::cout << crit.id << ' ' << (c.ok() ? "PASS" : "FAIL") << "  "
              << crit.name << ": " << c.summary() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
