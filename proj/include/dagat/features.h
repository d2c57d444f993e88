//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_FEATURES_H_
#define DAGAT_FEATURES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dagat/chem.h"
#include "dagat/matrix.h"

namespace dagat {

// Per-atom one-hot layout inside a 28-wide block:
//   [0, 10)  element C N O S F P Cl Br B H
//   [10, 16) degree 0..5
//   [16, 21) attached hydrogens 0..4
//   [21, 27) implicit valence 0..5
//   27       aromatic flag
// Ligand atoms fill columns [0, 28); protein atoms [28, 56).
namespace feature_layout {
inline constexpr std::size_t kBlock = 28;
inline constexpr std::size_t kDim = 2 * kBlock;
inline constexpr std::size_t kElement = 0;
inline constexpr std::size_t kDegree = 10;
inline constexpr std::size_t kHydrogens = 16;
inline constexpr std::size_t kImplicitValence = 21;
inline constexpr std::size_t kAromatic = 27;
inline constexpr int kMaxDegree = 5;
inline constexpr int kMaxHydrogens = 4;
inline constexpr int kMaxImplicitValence = 5;
} // namespace feature_layout

struct FeaturizeStats {
  // Annotations above their top one-hot slot, clamped into it.
  std::size_t clamped = 0;
};

using FeatureRow = std::array<std::uint8_t, feature_layout::kDim>;

FeatureRow atom_features(const Atom &atom, FeaturizeStats *stats = nullptr);

// Stable permutation putting ligand atoms before protein atoms.
std::vector<std::size_t> ligand_first_order(const ComplexRecord &rec);

// N x 56 binary matrix, rows in ligand_first_order.
Matrix featurize(const ComplexRecord &rec, FeaturizeStats *stats = nullptr);

} // namespace dagat

#endif // DAGAT_FEATURES_H_
