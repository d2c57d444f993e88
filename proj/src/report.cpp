//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/report.h"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace dagat {
namespace {

std::size_t metric_index(const std::string &name) {
  for (std::size_t k = 0; k < kMetricNames.size(); ++k)
    if (name == kMetricNames[k])
      return k;
  throw MetricError("unknown metric '" + name + "'");
}

std::optional<double> try_metric(const std::function<double()> &f) {
  try {
    return f();
  } catch (const MetricError &) {
    return std::nullopt;
  }
}

MetricRow score_protein(const std::string &protein, const ScoredSet &s,
                        double lambda) {
  MetricRow row;
  row.protein_id = protein;
  for (const ScoredItem &it: s)
    (it.label == 1 ? row.positives : row.negatives)++;
  row.values[0] = try_metric([&] { return auroc(s); });
  row.values[1] = try_metric([&] { return adjusted_logauc(s, lambda); });
  row.values[2] = try_metric([&] { return prauc(s); });
  for (std::size_t k = 0; k < 4; ++k)
    row.values[3 + k] = try_metric([&] { return re_score(s, kReLevels[k]); });
  return row;
}

} // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

EvalReport evaluate_screening(const ScoredSet &scores,
                              const std::vector<std::string> &metrics,
                              double logauc_lambda) {
  EvalReport report;
  report.metrics = metrics;
  std::vector<std::size_t> selected;
  for (const auto &m: metrics)
    selected.push_back(metric_index(m));

  for (const auto &[protein, items]: group_by_protein(scores))
    report.proteins.push_back(score_protein(protein, items, logauc_lambda));

  report.aggregate.protein_id = "__mean__";
  report.skipped.resize(metrics.size());
  for (const MetricRow &r: report.proteins) {
    report.aggregate.positives += r.positives;
    report.aggregate.negatives += r.negatives;
  }
  for (std::size_t k = 0; k < selected.size(); ++k) {
    std::vector<std::pair<std::string, std::optional<double>>> values;
    for (const MetricRow &r: report.proteins)
      values.emplace_back(r.protein_id, r.values[selected[k]]);
    try {
      const ProteinAverage avg = per_protein_average(values);
      report.aggregate.values[selected[k]] = avg.mean;
      report.skipped[k] = avg.skipped;
    } catch (const MetricError &) {
      for (const auto &[protein, v]: values)
        report.skipped[k].push_back(protein);
    }
  }
  return report;
}

std::string report_json(const EvalReport &report) {
  using nlohmann::ordered_json;
  auto row_json = [&](const MetricRow &r) {
    ordered_json j;
    j["protein_id"] = r.protein_id;
    j["positives"] = r.positives;
    j["negatives"] = r.negatives;
    for (const auto &m: report.metrics) {
      const auto &v = r.values[metric_index(m)];
      j[m] = v ? ordered_json(*v) : ordered_json(nullptr);
    }
    return j;
  };
  ordered_json j;
  j["metrics"] = report.metrics;
  j["aggregate"] = row_json(report.aggregate);
  ordered_json proteins = ordered_json::array();
  for (const MetricRow &r: report.proteins)
    proteins.push_back(row_json(r));
  j["proteins"] = std::move(proteins);
  ordered_json skipped = ordered_json::object();
  for (std::size_t k = 0; k < report.metrics.size(); ++k)
    skipped[report.metrics[k]] = report.skipped[k];
  j["skipped"] = std::move(skipped);
  return j.dump(2) + "\n";
}

std::string report_csv(const EvalReport &report) {
  std::ostringstream out;
  out << "protein_id,positives,negatives";
  for (const auto &m: report.metrics)
    out << ',' << m;
  out << '\n';
  auto write_row = [&](const MetricRow &r) {
    out << r.protein_id << ',' << r.positives << ',' << r.negatives;
    for (const auto &m: report.metrics) {
      out << ',';
      if (const auto &v = r.values[metric_index(m)])
        out << format_double(*v);
    }
    out << '\n';
  };
  for (const MetricRow &r: report.proteins)
    write_row(r);
  write_row(report.aggregate);
  return out.str();
}

std::string roc_csv(const ScoredSet &scores) {
  std::ostringstream out;
  out << "threshold,fpr,tpr\n";
  for (const RocPoint &p: roc_curve(scores))
    out << format_double(p.threshold) << ',' << format_double(p.fpr) << ','
        << format_double(p.tpr) << '\n';
  return out.str();
}

std::string pr_csv(const ScoredSet &scores) {
  std::ostringstream out;
  out << "threshold,recall,precision\n";
  for (const PrPoint &p: pr_curve(scores))
    out << format_double(p.threshold) << ',' << format_double(p.recall) << ','
        << format_double(p.precision) << '\n';
  return out.str();
}

} // namespace dagat
