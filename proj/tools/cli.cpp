//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "dagat/binary_io.h"
#include "dagat/checkpoint.h"
#include "dagat/chem.h"
#include "dagat/features.h"
#include "dagat/graph.h"
#include "dagat/metrics.h"
#include "dagat/model.h"
#include "dagat/report.h"
#include "dagat/sample_cache.h"
#include "dagat/synthetic.h"
#include "dagat/trainer.h"

namespace dagat::cli {
namespace fs = std::filesystem;
namespace {

class DataError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kHistogramBins = 50;

struct ModelFlags {
  ModelConfig cfg;
  std::vector<CLI::Option *> opts;

  void add(CLI::App *app) {
    opts.push_back(app->add_option("--gat-layers", cfg.num_gat_layers,
                                   "Number of attention layers")
                       ->capture_default_str());
    opts.push_back(
        app->add_option("--gat-dim", cfg.gat_dim, "Attention layer width")
            ->capture_default_str());
    opts.push_back(app->add_option("--fc-dims", cfg.fc_dims,
                                   "Fully connected widths, last must be 1")
                       ->capture_default_str()
                       ->delimiter(','));
    opts.push_back(app->add_option("--dropout", cfg.dropout_rate,
                                   "Dropout rate during training")
                       ->capture_default_str());
    opts.push_back(app->add_option("--gat-dropout", cfg.dropout_after_gat,
                                   "Also drop out attention layer outputs")
                       ->capture_default_str());
  }

  bool any_set() const {
    return std::any_of(opts.begin(), opts.end(),
                       [](const CLI::Option *o) { return o->count() > 0; });
  }

  // Unset flags echo the checkpoint's values instead of the defaults.
  void resolve(const ModelConfig &c) const {
    std::string dims;
    for (std::size_t d: c.fc_dims)
      dims += (dims.empty() ? "[" : ",") + std::to_string(d);
    const std::string values[] = { std::to_string(c.num_gat_layers),
                                   std::to_string(c.gat_dim), dims + "]",
                                   format_double(c.dropout_rate),
                                   c.dropout_after_gat ? "1" : "0" };
    for (std::size_t k = 0; k < opts.size(); ++k)
      if (opts[k]->count() == 0)
        opts[k]->default_str(values[k]);
  }

  // Checkpoint config with any explicit flags applied on top.
  ModelConfig overlay(const ModelConfig &base) const {
    ModelConfig out = base;
    if (opts[0]->count())
      out.num_gat_layers = cfg.num_gat_layers;
    if (opts[1]->count())
      out.gat_dim = cfg.gat_dim;
    if (opts[2]->count())
      out.fc_dims = cfg.fc_dims;
    if (opts[3]->count())
      out.dropout_rate = cfg.dropout_rate;
    if (opts[4]->count())
      out.dropout_after_gat = cfg.dropout_after_gat;
    return out;
  }
};

Category category_flag(const std::string &name) {
  auto c = parse_category(name);
  if (!c)
    throw CLI::ValidationError("--category", "unknown category '" + name + "'");
  return *c;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string> &inputs,
                                    const std::string &ext) {
  std::vector<fs::path> out;
  for (const std::string &in: inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto &e: fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ext)
          found.push_back(e.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

// An echoed config writes unset lists as "", which reads back as {""}.
std::vector<std::string> non_empty(std::vector<std::string> v) {
  std::erase(v, std::string());
  return v;
}

std::vector<GraphSample> load_caches(const std::vector<std::string> &paths) {
  std::vector<GraphSample> all;
  for (const std::string &p: non_empty(paths)) {
    auto part = read_sample_cache(p);
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return all;
}

Checkpoint load_model(const std::string &path, const ModelFlags &flags) {
  Checkpoint ck = load_checkpoint(path);
  if (flags.any_set())
    ck = load_checkpoint(path, flags.overlay(ck.config));
  flags.resolve(ck.config);
  return ck;
}

// Only the command that ran, as a section that --config reads back.
void echo_config(const CLI::App &app, const fs::path &target) {
  const CLI::App *sub = app.get_subcommands().front();
  atomic_write_file(target, "[" + sub->get_name() + "]\n"
                                + sub->config_to_str(true, false));
}

void ensure_dir(const std::string &dir) {
  if (dir.empty())
    throw CLI::ValidationError("--out-dir", "output directory is required");
  fs::create_directories(dir);
}

ScoredSet scored_items(const std::vector<GraphSample> &samples,
                       const std::vector<double> &probs, bool labelled_only) {
  ScoredSet out;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (labelled_only && !samples[k].label)
      continue;
    out.push_back(ScoredItem { probs[k], samples[k].label.value_or(0),
                               samples[k].protein_id, samples[k].complex_id,
                               samples[k].rmsd });
  }
  return out;
}

// --- synth ------------------------------------------------------------------

struct SynthArgs {
  SyntheticOptions opts;
  std::string out;
};

void add_synth(CLI::App &app, SynthArgs &a) {
  CLI::App *s = app.add_subcommand("synth", "Write a synthetic toy corpus "
                                            "as canonical JSON lines");
  s->add_option("--out", a.out, "Output .jsonl path")->required();
  s->add_option("--count", a.opts.count, "Number of complexes")
      ->capture_default_str();
  s->add_option("--seed", a.opts.seed, "Random seed")->capture_default_str();
  s->add_option("--positive-fraction", a.opts.positive_fraction,
                "Target share of actives")
      ->capture_default_str();
  s->add_option("--num-proteins", a.opts.num_proteins,
                "Distinct protein ids")
      ->capture_default_str();
  s->add_option("--prefix", a.opts.id_prefix, "Complex id prefix")
      ->capture_default_str();
}

int cmd_synth(const CLI::App &app, const SynthArgs &a, std::ostream &out) {
  const auto records = generate_synthetic(a.opts);
  write_jsonl(a.out, records);
  echo_config(app, a.out + ".config.ini");
  std::size_t actives = 0;
  for (const auto &r: records)
    actives += r.label == 1 ? 1 : 0;
  out << "wrote " << records.size() << " complexes (" << actives
      << " active) to " << a.out << '\n';
  return kOk;
}

// --- featurize --------------------------------------------------------------

struct FeaturizeArgs {
  std::vector<std::string> inputs;
  std::string format = "json";
  std::string out;
  std::string pdb;
  std::string protein_id;
  std::string category = "unlabeled";
  std::optional<int> label;
  bool pose_labels = false;
  double prune = kPruneCutoff;
  std::size_t threads = 1;
};

void add_featurize(CLI::App &app, FeaturizeArgs &a) {
  CLI::App *s = app.add_subcommand(
      "featurize", "Parse, prune and featurize complexes into a sample cache");
  s->add_option("--input", a.inputs, "Input files or directories")
      ->required();
  s->add_option("--format", a.format, "Input format")
      ->check(CLI::IsMember({ "json", "sdf-pdb" }))
      ->capture_default_str();
  s->add_option("--out", a.out, "Output cache path")->required();
  s->add_option("--pdb", a.pdb,
                "Protein for every SDF (default: <stem>.pdb next to it)");
  s->add_option("--protein-id", a.protein_id, "Protein id for SDF input");
  s->add_option("--category", a.category, "Category for SDF input")
      ->capture_default_str();
  s->add_option("--label", a.label, "Label for SDF input")
      ->check(CLI::Range(0, 1));
  s->add_flag("--pose-labels", a.pose_labels,
              "Label by rmsd: < 2 positive, > 4 negative, else dropped");
  s->add_option("--prune", a.prune, "Protein pruning radius in angstrom")
      ->capture_default_str();
  s->add_option("--threads", a.threads, "Worker threads")
      ->capture_default_str();
}

int cmd_featurize(const CLI::App &app, const FeaturizeArgs &a,
                  std::ostream &out, std::ostream &err) {
  IngestStats stats;
  std::vector<ComplexRecord> records;
  std::size_t files_ok = 0, files_failed = 0;

  const bool json = a.format == "json";
  for (const fs::path &file:
       expand_inputs(non_empty(a.inputs), json ? ".jsonl" : ".sdf")) {
    try {
      std::vector<ComplexRecord> got;
      if (json) {
        got = read_jsonl(file, &stats);
      } else {
        fs::path pdb = a.pdb.empty() ? fs::path(file).replace_extension(".pdb")
                                     : fs::path(a.pdb);
        SdfPdbOptions opts;
        opts.protein_id = a.protein_id;
        opts.category = category_flag(a.category);
        opts.label = a.label;
        got = read_sdf_pdb(file, pdb, opts, &stats);
      }
      records.insert(records.end(), got.begin(), got.end());
      ++files_ok;
    } catch (const std::exception &e) {
      err << "error: " << file.string() << ": " << e.what() << '\n';
      ++files_failed;
    }
  }

  std::size_t pose_omitted = 0;
  if (a.pose_labels) {
    std::vector<ComplexRecord> kept;
    for (ComplexRecord &r: records) {
      if (!r.rmsd) {
        stats.rejected.push_back(r.complex_id + ": no rmsd for pose labelling");
        ++stats.records_rejected;
        continue;
      }
      const PoseLabel pl = label_pose(*r.rmsd);
      if (pl == PoseLabel::kOmitted) {
        ++pose_omitted;
        continue;
      }
      r.label = pl == PoseLabel::kPositive ? 1 : 0;
      if (r.category == Category::kUnlabeled)
        r.category = pl == PoseLabel::kPositive ? Category::kPdbbindPositive
                                                : Category::kPdbbindNegative;
      kept.push_back(std::move(r));
    }
    records = std::move(kept);
  }

  std::vector<std::optional<GraphSample>> slots(records.size());
  std::vector<std::string> failures(records.size());
  parallel_for(records.size(), a.threads, [&](std::size_t k) {
    try {
      slots[k] = build_sample(prune_protein(records[k], a.prune));
    } catch (const std::exception &e) {
      failures[k] = records[k].complex_id + ": " + e.what();
    }
  });

  std::vector<GraphSample> samples;
  std::map<Category, std::size_t> per_category;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (!slots[k]) {
      stats.rejected.push_back(failures[k]);
      ++stats.records_rejected;
      continue;
    }
    ++per_category[slots[k]->category];
    samples.push_back(std::move(*slots[k]));
  }

  out << "files: " << files_ok << " read, " << files_failed << " failed\n";
  out << "samples: " << samples.size() << "/" << stats.records_read << '\n';
  for (const auto &[c, n]: per_category)
    out << "  " << category_name(c) << ": " << n << '\n';
  out << "dropped atoms: " << stats.dropped_atoms << '\n';
  if (a.pose_labels)
    out << "poses omitted (2 <= rmsd <= 4): " << pose_omitted << '\n';
  out << "rejected: " << stats.records_rejected << '\n';
  for (const std::string &r: stats.rejected)
    out << "  " << r << '\n';

  if (samples.empty()) {
    err << "error: no samples produced\n";
    return kDataError;
  }
  write_sample_cache(a.out, samples);
  echo_config(app, a.out + ".config.ini");
  return kOk;
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::vector<std::string> caches;
  std::vector<std::string> val_caches;
  std::string out_dir;
  std::string init;
  double val_fraction = 0.1;
  bool screening_only = false;
  TrainConfig cfg;
  ModelFlags model;
};

void add_train(CLI::App &app, TrainArgs &a) {
  CLI::App *s = app.add_subcommand("train", "Train a model on sample caches");
  s->add_option("--cache", a.caches, "Training sample caches")->required();
  s->add_option("--val-cache", a.val_caches,
                "Validation caches (default: hold out proteins)");
  s->add_option("--val-fraction", a.val_fraction,
                "Share of proteins held out for validation")
      ->capture_default_str();
  s->add_option("--out-dir", a.out_dir, "Output directory")->required();
  s->add_option("--init", a.init, "Start from this checkpoint");
  s->add_flag("--screening-only", a.screening_only,
              "Balance dude_active and dude_inactive only");
  s->add_option("--batch-size", a.cfg.batch_size)->capture_default_str();
  s->add_option("--iterations", a.cfg.iterations)->capture_default_str();
  s->add_option("--lr", a.cfg.learning_rate, "Adam learning rate")
      ->capture_default_str();
  s->add_option("--seed", a.cfg.seed)->capture_default_str();
  s->add_option("--checkpoint-every", a.cfg.checkpoint_every)
      ->capture_default_str();
  s->add_option("--threads", a.cfg.threads)->capture_default_str();
  a.model.add(s);
}

int cmd_train(const CLI::App &app, TrainArgs &a, std::ostream &out) {
  ensure_dir(a.out_dir);
  echo_config(app, fs::path(a.out_dir) / "config.ini");
  if (a.screening_only)
    a.cfg.categories = { Category::kDudeActive, Category::kDudeInactive };

  std::vector<GraphSample> train_set, val_set;
  if (non_empty(a.val_caches).empty()) {
    split_by_protein(load_caches(a.caches), a.val_fraction, a.cfg.seed,
                     train_set, val_set);
  } else {
    train_set = load_caches(a.caches);
    val_set = load_caches(a.val_caches);
  }

  const CategoryPools pools = make_pools(train_set, a.cfg.categories);
  for (Category c: a.cfg.categories)
    if (pools.at(c).empty())
      throw DataError("training pool '" + std::string(category_name(c))
                      + "' is empty"
                      + (a.screening_only
                             ? std::string()
                             : " (use --screening-only for a two-category run)"));

  std::optional<ModelParams> init;
  if (!a.init.empty())
    init = load_checkpoint(a.init, a.model.cfg).params;

  out << "train samples: " << train_set.size()
      << ", validation samples: " << val_set.size() << '\n';
  const TrainResult r = train(train_set, val_set, a.model.cfg, a.cfg,
                              a.out_dir, init ? &*init : nullptr);
  const TrainLogRow &last = r.log.back();
  out << "iterations: " << r.iterations_done
      << ", last loss: " << format_double(last.train_loss);
  if (std::isfinite(last.val_auroc))
    out << ", last val auroc: " << format_double(last.val_auroc);
  if (std::isfinite(r.best_val_auroc))
    out << ", best val auroc: " << format_double(r.best_val_auroc);
  out << ", mu: " << format_double(last.mu)
      << ", sigma: " << format_double(last.sigma) << '\n';
  return kOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::vector<std::string> caches;
  std::string checkpoint;
  std::string out_dir;
  std::vector<std::string> metrics { kMetricNames.begin(), kMetricNames.end() };
  double lambda = 0.001;
  std::size_t threads = 1;
  ModelFlags model;
};

void add_evaluate(CLI::App &app, EvaluateArgs &a) {
  CLI::App *s = app.add_subcommand(
      "evaluate", "Score a cache and write per-protein metric reports");
  s->add_option("--cache", a.caches, "Sample caches")->required();
  s->add_option("--checkpoint", a.checkpoint)->required();
  s->add_option("--out-dir", a.out_dir)->required();
  s->add_option("--metrics", a.metrics, "Metric subset")
      ->delimiter(',')
      ->check(CLI::IsMember(
          std::vector<std::string>(kMetricNames.begin(), kMetricNames.end())))
      ->capture_default_str();
  s->add_option("--logauc-lambda", a.lambda)->capture_default_str();
  s->add_option("--threads", a.threads)->capture_default_str();
  a.model.add(s);
}

int cmd_evaluate(const CLI::App &app, const EvaluateArgs &a,
                 std::ostream &out) {
  ensure_dir(a.out_dir);
  const fs::path dir(a.out_dir);
  const Checkpoint ck = load_model(a.checkpoint, a.model);
  echo_config(app, dir / "config.ini");
  const auto samples = load_caches(a.caches);
  const auto probs = predict_all(samples, ck.params, ck.config, a.threads);
  const ScoredSet scored = scored_items(samples, probs, true);
  if (scored.empty())
    throw DataError("no labelled samples to evaluate");

  const EvalReport rep = evaluate_screening(scored, a.metrics, a.lambda);
  atomic_write_file(dir / "report.json", report_json(rep));
  atomic_write_file(dir / "report.csv", report_csv(rep));
  try {
    atomic_write_file(dir / "roc.csv", roc_csv(scored));
  } catch (const MetricError &e) {
    out << "roc curve skipped: " << e.what() << '\n';
  }
  try {
    atomic_write_file(dir / "pr.csv", pr_csv(scored));
  } catch (const MetricError &e) {
    out << "pr curve skipped: " << e.what() << '\n';
  }

  out << "proteins: " << rep.proteins.size() << ", samples: " << scored.size()
      << '\n';
  for (std::size_t m = 0; m < rep.metrics.size(); ++m) {
    const auto it = std::find(kMetricNames.begin(), kMetricNames.end(),
                              rep.metrics[m]);
    const auto &v = rep.aggregate.values[it - kMetricNames.begin()];
    out << "  " << rep.metrics[m] << ": "
        << (v ? format_double(*v) : std::string("n/a"));
    if (!rep.skipped[m].empty())
      out << " (" << rep.skipped[m].size() << " proteins skipped)";
    out << '\n';
  }
  return kOk;
}

// --- predict ----------------------------------------------------------------

struct PredictArgs {
  std::vector<std::string> caches;
  std::vector<std::string> jsonl;
  std::string checkpoint;
  std::string out_dir;
  double prune = kPruneCutoff;
  std::size_t threads = 1;
  ModelFlags model;
};

void add_predict(CLI::App &app, PredictArgs &a) {
  CLI::App *s = app.add_subcommand(
      "predict", "Write per-complex probabilities and a score histogram");
  s->add_option("--cache", a.caches, "Sample caches");
  s->add_option("--jsonl", a.jsonl,
                "Canonical JSON-lines files, featurized on the fly");
  s->add_option("--checkpoint", a.checkpoint)->required();
  s->add_option("--out-dir", a.out_dir)->required();
  s->add_option("--prune", a.prune, "Pruning radius for --jsonl input")
      ->capture_default_str();
  s->add_option("--threads", a.threads)->capture_default_str();
  a.model.add(s);
}

std::string histogram_csv(const std::vector<double> &probs) {
  std::vector<std::size_t> counts(kHistogramBins, 0);
  for (double p: probs) {
    auto bin = static_cast<std::size_t>(p * kHistogramBins);
    ++counts[std::min(bin, kHistogramBins - 1)];
  }
  std::ostringstream out;
  out << "bin_start,bin_end,count\n";
  for (std::size_t b = 0; b < kHistogramBins; ++b)
    out << format_double(static_cast<double>(b) / kHistogramBins) << ','
        << format_double(static_cast<double>(b + 1) / kHistogramBins) << ','
        << counts[b] << '\n';
  return out.str();
}

int cmd_predict(const CLI::App &app, const PredictArgs &a, std::ostream &out) {
  if (non_empty(a.caches).empty() == non_empty(a.jsonl).empty())
    throw CLI::ValidationError("predict", "give exactly one of --cache and "
                                          "--jsonl");
  ensure_dir(a.out_dir);
  const fs::path dir(a.out_dir);
  const Checkpoint ck = load_model(a.checkpoint, a.model);
  echo_config(app, dir / "config.ini");

  std::vector<GraphSample> samples;
  if (!non_empty(a.caches).empty()) {
    samples = load_caches(a.caches);
  } else {
    for (const std::string &path: non_empty(a.jsonl))
      for (const ComplexRecord &r: read_jsonl(path))
        samples.push_back(build_sample(prune_protein(r, a.prune)));
  }
  const auto probs = predict_all(samples, ck.params, ck.config, a.threads);

  std::ostringstream scores;
  scores << "complex_id,protein_id,probability\n";
  for (std::size_t k = 0; k < samples.size(); ++k)
    scores << samples[k].complex_id << ',' << samples[k].protein_id << ','
           << format_double(probs[k]) << '\n';
  atomic_write_file(dir / "scores.csv", scores.str());
  atomic_write_file(dir / "histogram.csv", histogram_csv(probs));
  out << "scored " << samples.size() << " complexes\n";
  return kOk;
}

// --- poses ------------------------------------------------------------------

struct PosesArgs {
  std::vector<std::string> caches;
  std::string checkpoint;
  std::string out_dir;
  std::vector<std::size_t> top { 1, 2, 3, 5, 10 };
  std::size_t threads = 1;
  ModelFlags model;
};

void add_poses(CLI::App &app, PosesArgs &a) {
  CLI::App *s = app.add_subcommand(
      "poses", "Top-N near-native success over docking poses");
  s->add_option("--cache", a.caches, "Pose caches with rmsd")->required();
  s->add_option("--checkpoint", a.checkpoint)->required();
  s->add_option("--out-dir", a.out_dir)->required();
  s->add_option("--top", a.top, "N values")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--threads", a.threads)->capture_default_str();
  a.model.add(s);
}

int cmd_poses(const CLI::App &app, const PosesArgs &a, std::ostream &out) {
  ensure_dir(a.out_dir);
  const fs::path dir(a.out_dir);
  const Checkpoint ck = load_model(a.checkpoint, a.model);
  echo_config(app, dir / "config.ini");
  const auto samples = load_caches(a.caches);
  const auto probs = predict_all(samples, ck.params, ck.config, a.threads);
  const ScoredSet poses = scored_items(samples, probs, false);

  std::ostringstream csv;
  csv << "n,success_percent\n";
  out << "top-N success over complexes:\n";
  for (std::size_t n: a.top) {
    const double pct = 100.0 * topn_success(poses, n);
    csv << n << ',' << format_double(pct) << '\n';
    out << "  top-" << n << ": " << format_double(pct) << "%\n";
  }
  atomic_write_file(dir / "topn.csv", csv.str());
  return kOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app("Distance-aware gated graph attention for protein-ligand "
               "complexes",
               "dagat");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "INI file; [section] names match commands");
  app.require_subcommand(1);
  app.fallthrough();

  SynthArgs synth;
  FeaturizeArgs featurize;
  TrainArgs train_args;
  EvaluateArgs evaluate;
  PredictArgs predict_args;
  PosesArgs poses;
  add_synth(app, synth);
  add_featurize(app, featurize);
  add_train(app, train_args);
  add_evaluate(app, evaluate);
  add_predict(app, predict_args);
  add_poses(app, poses);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand("synth"))
      return cmd_synth(app, synth, out);
    if (app.got_subcommand("featurize"))
      return cmd_featurize(app, featurize, out, err);
    if (app.got_subcommand("train"))
      return cmd_train(app, train_args, out);
    if (app.got_subcommand("evaluate"))
      return cmd_evaluate(app, evaluate, out);
    if (app.got_subcommand("predict"))
      return cmd_predict(app, predict_args, out);
    if (app.got_subcommand("poses"))
      return cmd_poses(app, poses, out);
  } catch (const CLI::ValidationError &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericFailure &e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

} // namespace dagat::cli
