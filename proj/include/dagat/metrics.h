//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_METRICS_H_
#define DAGAT_METRICS_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dagat {

class MetricError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct ScoredItem {
  double score = 0;
  int label = 0;
  std::string protein_id;
  std::string complex_id;
  std::optional<double> rmsd;
};

using ScoredSet = std::vector<ScoredItem>;

// Empirical ROC: one point per distinct score (ties form a single diagonal
// step), from (0, 0) to (1, 1). Higher scores rank first.
struct RocPoint {
  double fpr;
  double tpr;
  double threshold;
  std::size_t false_positives;
  std::size_t true_positives;
};

std::vector<RocPoint> roc_curve(const ScoredSet &s);

struct PrPoint {
  double recall;
  double precision;
  double threshold;
};

std::vector<PrPoint> pr_curve(const ScoredSet &s);

// Mann-Whitney AUROC; tied positive/negative pairs count one half.
double auroc(const ScoredSet &s);

// Area under TPR over log10(FPR) on [lambda, 1], normalised by
// log10(1 / lambda). FPR values below lambda are clamped to lambda.
double logauc(const ScoredSet &s, double lambda = 0.001);
// logauc of the TPR = FPR diagonal: (1 - lambda) / (ln 10 * log10(1/lambda)).
double logauc_random_baseline(double lambda = 0.001);
// logauc minus the random baseline.
double adjusted_logauc(const ScoredSet &s, double lambda = 0.001);

// Average precision: sum over thresholds of (R_k - R_{k-1}) * P_k.
double prauc(const ScoredSet &s);

// TPR / FPR at the first ROC point whose FPR reaches `fpr`. Throws if there
// are fewer than 1/fpr negatives.
double re_score(const ScoredSet &s, double fpr);

inline constexpr double kReLevels[] = { 0.005, 0.01, 0.02, 0.05 };

struct ProteinAverage {
  double mean = 0;
  std::size_t used = 0;
  std::vector<std::string> skipped; // proteins without a value
};

// Unweighted mean over proteins that have a value. Throws if none do.
ProteinAverage per_protein_average(
    const std::vector<std::pair<std::string, std::optional<double>>> &values);

// Fraction of complexes (grouped by complex_id) with a pose of rmsd < 2 A
// among their n highest-scoring poses. Equal scores keep input order.
double topn_success(const ScoredSet &poses, std::size_t n);

// Items per protein, proteins in order of first appearance.
std::vector<std::pair<std::string, ScoredSet>>
group_by_protein(const ScoredSet &s);

} // namespace dagat

#endif // DAGAT_METRICS_H_
