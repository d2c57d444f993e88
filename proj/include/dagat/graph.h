//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_GRAPH_H_
#define DAGAT_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dagat/chem.h"
#include "dagat/matrix.h"

namespace dagat {

inline constexpr double kPruneCutoff = 8.0;   // angstrom, strict ">" removes
inline constexpr double kContactCutoff = 5.0; // angstrom, strict "<" keeps
inline constexpr double kNearNativeRmsd = 2.0;
inline constexpr double kDecoyRmsd = 4.0;

// Model-ready complex. Atoms are ordered ligand-first.
//
// Invariants: a1 symmetric with unit diagonal; dist symmetric with zero
// diagonal; inter_mask symmetric, disjoint from a1, and only set for
// ligand-protein pairs closer than kContactCutoff.
struct GraphSample {
  std::string complex_id;
  std::string protein_id;
  Category category = Category::kUnlabeled;
  std::optional<int> label;
  std::optional<double> rmsd;

  Matrix features;   // N x 56
  Matrix a1;         // N x N, {0,1}
  Matrix dist;       // N x N, angstrom
  Matrix inter_mask; // N x N, {0,1}
  std::vector<std::uint8_t> is_ligand;

  std::size_t num_atoms() const { return is_ligand.size(); }
  std::size_t num_contacts() const; // unordered ligand-protein pairs

  bool operator==(const GraphSample &) const = default;
};

// Drops protein atoms farther than `cutoff` from every ligand atom, with their
// bonds. Annotations are left untouched. Throws InvalidRecord if no protein
// atom survives.
ComplexRecord prune_protein(const ComplexRecord &rec,
                            double cutoff = kPruneCutoff);

// Validates `rec` and builds the dense graph tensors. Does not prune.
GraphSample build_sample(const ComplexRecord &rec);

// Throws std::invalid_argument if any invariant above is violated.
void check_sample_invariants(const GraphSample &s);

// Ligand atoms of `rec` in input order.
std::vector<Atom> ligand_atoms(const ComplexRecord &rec);

// Root mean square displacement over heavy atoms (hydrogens of `reference`
// are skipped), in a shared frame: no superposition, no symmetry matching.
double compute_rmsd(const std::vector<Atom> &pose,
                    const std::vector<Atom> &reference);

enum class PoseLabel { kPositive, kNegative, kOmitted };

PoseLabel label_pose(double rmsd);

} // namespace dagat

#endif // DAGAT_GRAPH_H_
