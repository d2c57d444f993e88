//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_REPORT_H_
#define DAGAT_REPORT_H_

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dagat/metrics.h"

namespace dagat {

// Metric names accepted by the CLI and used as report columns.
inline constexpr std::array<const char *, 7> kMetricNames {
  "auroc", "adjusted_logauc", "prauc", "re_0.5", "re_1", "re_2", "re_5"
};

struct MetricRow {
  std::string protein_id;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  // Indexed like kMetricNames; empty when not computable for this protein.
  std::array<std::optional<double>, kMetricNames.size()> values {};
};

// Per-protein rows plus an aggregate row holding the unweighted mean of each
// metric over proteins where it was computable.
struct EvalReport {
  std::vector<std::string> metrics; // selected subset of kMetricNames
  std::vector<MetricRow> proteins;
  MetricRow aggregate;
  // Per metric: proteins that could not contribute.
  std::vector<std::vector<std::string>> skipped;
};

// Throws MetricError for unknown metric names. A metric computable for no
// protein leaves an empty aggregate cell.
EvalReport evaluate_screening(const ScoredSet &scores,
                              const std::vector<std::string> &metrics,
                              double logauc_lambda = 0.001);

std::string report_json(const EvalReport &report);
// Header "protein_id,positives,negatives,<metrics...>"; aggregate row last,
// with protein_id "__mean__". Missing values are empty cells.
std::string report_csv(const EvalReport &report);

std::string roc_csv(const ScoredSet &scores);
std::string pr_csv(const ScoredSet &scores);

// Shortest round-trip decimal representation.
std::string format_double(double v);

} // namespace dagat

#endif // DAGAT_REPORT_H_
