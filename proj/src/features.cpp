//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/features.h"

#include <algorithm>
#include <numeric>

namespace dagat {
namespace {

int clamp_slot(int value, int max, FeaturizeStats *stats) {
  if (value > max) {
    if (stats)
      ++stats->clamped;
    return max;
  }
  return std::max(value, 0);
}

} // namespace

FeatureRow atom_features(const Atom &atom, FeaturizeStats *stats) {
  namespace fl = feature_layout;
  FeatureRow row {};
  const std::size_t base = atom.is_ligand ? 0 : fl::kBlock;
  row[base + fl::kElement + static_cast<std::size_t>(atom.element)] = 1;
  row[base + fl::kDegree
      + static_cast<std::size_t>(clamp_slot(atom.degree, fl::kMaxDegree, stats))] = 1;
  row[base + fl::kHydrogens
      + static_cast<std::size_t>(
          clamp_slot(atom.num_hydrogens, fl::kMaxHydrogens, stats))] = 1;
  row[base + fl::kImplicitValence
      + static_cast<std::size_t>(clamp_slot(atom.implicit_valence,
                                            fl::kMaxImplicitValence, stats))] = 1;
  row[base + fl::kAromatic] = atom.aromatic ? 1 : 0;
  return row;
}

std::vector<std::size_t> ligand_first_order(const ComplexRecord &rec) {
  std::vector<std::size_t> order(rec.atoms.size());
  std::iota(order.begin(), order.end(), std::size_t { 0 });
  std::stable_partition(order.begin(), order.end(), [&](std::size_t k) {
    return rec.atoms[k].is_ligand;
  });
  return order;
}

Matrix featurize(const ComplexRecord &rec, FeaturizeStats *stats) {
  const auto order = ligand_first_order(rec);
  Matrix out(order.size(), feature_layout::kDim);
  for (std::size_t r = 0; r < order.size(); ++r) {
    const FeatureRow row = atom_features(rec.atoms[order[r]], stats);
    std::copy(row.begin(), row.end(), out.row(r).begin());
  }
  return out;
}

} // namespace dagat
