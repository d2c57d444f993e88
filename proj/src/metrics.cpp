//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>

#include "dagat/graph.h"

namespace dagat {
namespace {

struct Counts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

Counts count_labels(const ScoredSet &s) {
  Counts c;
  for (const ScoredItem &it: s) {
    if (it.label != 0 && it.label != 1)
      throw MetricError("labels must be 0 or 1");
    if (!std::isfinite(it.score))
      throw MetricError("scores must be finite");
    (it.label == 1 ? c.positives : c.negatives)++;
  }
  return c;
}

Counts require_both_classes(const ScoredSet &s) {
  const Counts c = count_labels(s);
  if (c.positives == 0 || c.negatives == 0)
    throw MetricError("metric needs at least one positive and one negative");
  return c;
}

std::vector<std::size_t> descending_order(const ScoredSet &s) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t { 0 });
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s[a].score > s[b].score;
  });
  return order;
}

} // namespace

std::vector<RocPoint> roc_curve(const ScoredSet &s) {
  const Counts c = require_both_classes(s);
  const auto order = descending_order(s);
  std::vector<RocPoint> pts;
  pts.push_back(RocPoint { 0, 0, std::numeric_limits<double>::infinity(), 0, 0 });
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double thr = s[order[k]].score;
    for (; k < order.size() && s[order[k]].score == thr; ++k)
      (s[order[k]].label == 1 ? tp : fp)++;
    pts.push_back(RocPoint { static_cast<double>(fp) / static_cast<double>(c.negatives),
                             static_cast<double>(tp) / static_cast<double>(c.positives),
                             thr, fp, tp });
  }
  return pts;
}

std::vector<PrPoint> pr_curve(const ScoredSet &s) {
  const Counts c = count_labels(s);
  if (c.positives == 0)
    throw MetricError("precision-recall needs at least one positive");
  const auto order = descending_order(s);
  std::vector<PrPoint> pts;
  std::size_t tp = 0, seen = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double thr = s[order[k]].score;
    for (; k < order.size() && s[order[k]].score == thr; ++k, ++seen)
      tp += s[order[k]].label == 1 ? 1 : 0;
    pts.push_back(PrPoint { static_cast<double>(tp) / static_cast<double>(c.positives),
                            static_cast<double>(tp) / static_cast<double>(seen),
                            thr });
  }
  return pts;
}

double auroc(const ScoredSet &s) {
  const Counts c = require_both_classes(s);
  const auto roc = roc_curve(s);
  // Twice the Mann-Whitney U, kept integral so ties contribute exactly 1/2.
  std::uint64_t twice_u = 0;
  for (std::size_t k = 1; k < roc.size(); ++k) {
    const std::uint64_t dfp = roc[k].false_positives - roc[k - 1].false_positives;
    const std::uint64_t dtp = roc[k].true_positives - roc[k - 1].true_positives;
    twice_u += dfp * (2 * roc[k - 1].true_positives + dtp);
  }
  return static_cast<double>(twice_u)
         / (2.0 * static_cast<double>(c.positives)
            * static_cast<double>(c.negatives));
}

double logauc(const ScoredSet &s, double lambda) {
  if (!(lambda > 0 && lambda < 1))
    throw MetricError("logauc: lambda must be in (0, 1)");
  const auto roc = roc_curve(s);
  double area = 0;
  for (std::size_t k = 1; k < roc.size(); ++k) {
    const double x0 = std::log10(std::max(roc[k - 1].fpr, lambda));
    const double x1 = std::log10(std::max(roc[k].fpr, lambda));
    area += (x1 - x0) * (roc[k - 1].tpr + roc[k].tpr) / 2;
  }
  return area / std::log10(1.0 / lambda);
}

double logauc_random_baseline(double lambda) {
  return (1.0 - lambda) / (std::log(10.0) * std::log10(1.0 / lambda));
}

double adjusted_logauc(const ScoredSet &s, double lambda) {
  return logauc(s, lambda) - logauc_random_baseline(lambda);
}

double prauc(const ScoredSet &s) {
  const auto pr = pr_curve(s);
  double ap = 0, prev_recall = 0;
  for (const PrPoint &p: pr) {
    ap += (p.recall - prev_recall) * p.precision;
    prev_recall = p.recall;
  }
  return ap;
}

double re_score(const ScoredSet &s, double fpr) {
  if (!(fpr > 0 && fpr <= 1))
    throw MetricError("re_score: fpr level must be in (0, 1]");
  const Counts c = require_both_classes(s);
  const double needed = fpr * static_cast<double>(c.negatives);
  if (needed < 1.0 - 1e-9)
    throw MetricError("re_score: " + std::to_string(c.negatives)
                      + " negatives cannot realize FPR "
                      + std::to_string(fpr));
  const auto min_fp = static_cast<std::size_t>(std::ceil(needed - 1e-9));
  for (const RocPoint &p: roc_curve(s)) {
    if (p.false_positives < min_fp)
      continue;
    return static_cast<double>(p.true_positives)
           * static_cast<double>(c.negatives)
           / (static_cast<double>(c.positives)
              * static_cast<double>(p.false_positives));
  }
  throw MetricError("re_score: FPR level not reached");
}

ProteinAverage per_protein_average(
    const std::vector<std::pair<std::string, std::optional<double>>> &values) {
  ProteinAverage out;
  double total = 0;
  for (const auto &[protein, v]: values) {
    if (!v) {
      out.skipped.push_back(protein);
      continue;
    }
    total += *v;
    ++out.used;
  }
  if (out.used == 0)
    throw MetricError("no protein has a computable value");
  out.mean = total / static_cast<double>(out.used);
  return out;
}

double topn_success(const ScoredSet &poses, std::size_t n) {
  if (n == 0)
    throw MetricError("topn_success: n must be positive");
  std::vector<std::string> complexes;
  std::map<std::string, std::vector<const ScoredItem *>> groups;
  for (const ScoredItem &it: poses) {
    if (!it.rmsd)
      throw MetricError("pose '" + it.complex_id + "' has no rmsd");
    auto [pos, inserted] = groups.try_emplace(it.complex_id);
    if (inserted)
      complexes.push_back(it.complex_id);
    pos->second.push_back(&it);
  }
  if (complexes.empty())
    throw MetricError("topn_success: no poses");
  std::size_t hits = 0;
  for (const std::string &id: complexes) {
    auto &g = groups[id];
    std::stable_sort(g.begin(), g.end(), [](const ScoredItem *a, const ScoredItem *b) {
      return a->score > b->score;
    });
    const std::size_t take = std::min(n, g.size());
    for (std::size_t k = 0; k < take; ++k)
      if (*g[k]->rmsd < kNearNativeRmsd) {
        ++hits;
        break;
      }
  }
  return static_cast<double>(hits) / static_cast<double>(complexes.size());
}

std::vector<std::pair<std::string, ScoredSet>>
group_by_protein(const ScoredSet &s) {
  std::vector<std::pair<std::string, ScoredSet>> out;
  std::map<std::string, std::size_t> index;
  for (const ScoredItem &it: s) {
    auto [pos, inserted] = index.try_emplace(it.protein_id, out.size());
    if (inserted)
      out.emplace_back(it.protein_id, ScoredSet {});
    out[pos->second].second.push_back(it);
  }
  return out;
}

} // namespace dagat
