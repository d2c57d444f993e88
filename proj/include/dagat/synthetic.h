//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_SYNTHETIC_H_
#define DAGAT_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dagat/chem.h"

namespace dagat {

// Toy complexes whose label is a geometric rule the model can learn: a
// complex is active iff some ligand-protein N-O pair lies closer than
// `pair_cutoff`.
struct SyntheticOptions {
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::size_t min_ligand_atoms = 5;
  std::size_t max_ligand_atoms = 15;
  std::size_t min_protein_atoms = 20;
  std::size_t max_protein_atoms = 40;
  double positive_fraction = 0.5;
  std::size_t num_proteins = 20;
  double pair_cutoff = 3.5;
  std::string id_prefix = "synth";
};

// Labels are always recomputed with has_close_pair, so they hold even when
// a planted configuration could not be realized. Active complexes get
// Category::kDudeActive, inactive ones Category::kDudeInactive. Every
// protein atom lies within 8 A of the ligand.
std::vector<ComplexRecord> generate_synthetic(const SyntheticOptions &opts);

// Brute force over every ligand-protein pair.
bool has_close_pair(const ComplexRecord &rec, double cutoff = 3.5);

} // namespace dagat

#endif // DAGAT_SYNTHETIC_H_
