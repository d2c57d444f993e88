//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/graph.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dagat/features.h"

namespace dagat {

std::size_t GraphSample::num_contacts() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < inter_mask.rows(); ++i)
    for (std::size_t j = i + 1; j < inter_mask.cols(); ++j)
      n += inter_mask(i, j) != 0 ? 1 : 0;
  return n;
}

ComplexRecord prune_protein(const ComplexRecord &rec, double cutoff) {
  std::vector<const Atom *> ligand;
  for (const Atom &a: rec.atoms)
    if (a.is_ligand)
      ligand.push_back(&a);

  ComplexRecord out = rec;
  out.atoms.clear();
  out.bonds.clear();
  std::vector<long> remap(rec.atoms.size(), -1);
  for (std::size_t k = 0; k < rec.atoms.size(); ++k) {
    const Atom &a = rec.atoms[k];
    bool keep = a.is_ligand;
    if (!keep) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const Atom *l: ligand)
        nearest = std::min(nearest, distance(a.position, l->position));
      keep = !(nearest > cutoff);
    }
    if (keep) {
      remap[k] = static_cast<long>(out.atoms.size());
      out.atoms.push_back(a);
    }
  }
  for (const Bond &b: rec.bonds) {
    if (remap[b.i] < 0 || remap[b.j] < 0)
      continue;
    out.bonds.push_back(Bond { static_cast<std::size_t>(remap[b.i]),
                               static_cast<std::size_t>(remap[b.j]), b.order });
  }
  if (out.num_protein_atoms() == 0)
    throw InvalidRecord("record '" + rec.complex_id
                        + "': no protein atoms within "
                        + std::to_string(cutoff) + " A of the ligand");
  return out;
}

GraphSample build_sample(const ComplexRecord &rec) {
  validate(rec);
  const auto order = ligand_first_order(rec);
  const std::size_t n = order.size();
  std::vector<std::size_t> position_of(n);
  for (std::size_t r = 0; r < n; ++r)
    position_of[order[r]] = r;

  GraphSample s;
  s.complex_id = rec.complex_id;
  s.protein_id = rec.protein_id;
  s.category = rec.category;
  s.label = rec.label;
  s.rmsd = rec.rmsd;
  s.features = featurize(rec);
  s.a1 = Matrix::identity(n);
  s.dist = Matrix(n, n);
  s.inter_mask = Matrix(n, n);
  s.is_ligand.resize(n);
  for (std::size_t r = 0; r < n; ++r)
    s.is_ligand[r] = rec.atoms[order[r]].is_ligand ? 1 : 0;

  for (const Bond &b: rec.bonds) {
    const std::size_t i = position_of[b.i], j = position_of[b.j];
    s.a1(i, j) = 1;
    s.a1(j, i) = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Atom &ai = rec.atoms[order[i]];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Atom &aj = rec.atoms[order[j]];
      const double d = distance(ai.position, aj.position);
      s.dist(i, j) = static_cast<Real>(d);
      s.dist(j, i) = static_cast<Real>(d);
      if (ai.is_ligand != aj.is_ligand && d < kContactCutoff) {
        s.inter_mask(i, j) = 1;
        s.inter_mask(j, i) = 1;
      }
    }
  }
  return s;
}

void check_sample_invariants(const GraphSample &s) {
  const std::size_t n = s.num_atoms();
  auto fail = [&](const std::string &what) {
    throw std::invalid_argument("sample '" + s.complex_id + "': " + what);
  };
  if (s.features.rows() != n || s.features.cols() != feature_layout::kDim)
    fail("feature matrix shape " + s.features.shape_string());
  for (const Matrix *m: { &s.a1, &s.dist, &s.inter_mask })
    if (m->rows() != n || m->cols() != n)
      fail("adjacency shape " + m->shape_string());
  for (std::size_t i = 0; i < n; ++i) {
    if (s.a1(i, i) != 1)
      fail("a1 diagonal not 1 at " + std::to_string(i));
    if (s.dist(i, i) != 0)
      fail("dist diagonal not 0 at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (s.a1(i, j) != s.a1(j, i) || s.dist(i, j) != s.dist(j, i)
          || s.inter_mask(i, j) != s.inter_mask(j, i))
        fail("asymmetric entry at " + std::to_string(i) + ","
             + std::to_string(j));
      if (!std::isfinite(s.dist(i, j)))
        fail("non-finite distance");
      if (s.inter_mask(i, j) != 0) {
        if (s.a1(i, j) != 0)
          fail("contact overlaps a covalent edge");
        if (s.is_ligand[i] == s.is_ligand[j])
          fail("contact within one molecule");
        if (!(s.dist(i, j) < kContactCutoff))
          fail("contact beyond cutoff");
      }
    }
  }
}

std::vector<Atom> ligand_atoms(const ComplexRecord &rec) {
  std::vector<Atom> out;
  for (const Atom &a: rec.atoms)
    if (a.is_ligand)
      out.push_back(a);
  return out;
}

double compute_rmsd(const std::vector<Atom> &pose,
                    const std::vector<Atom> &reference) {
  if (pose.size() != reference.size())
    throw std::invalid_argument("compute_rmsd: atom count mismatch ("
                                + std::to_string(pose.size()) + " vs "
                                + std::to_string(reference.size()) + ")");
  double total = 0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < pose.size(); ++k) {
    if (reference[k].element == Element::H)
      continue;
    const double d = distance(pose[k].position, reference[k].position);
    total += d * d;
    ++count;
  }
  if (count == 0)
    throw std::invalid_argument("compute_rmsd: no heavy atoms");
  return std::sqrt(total / static_cast<double>(count));
}

PoseLabel label_pose(double rmsd) {
  if (!(rmsd >= 0))
    throw std::invalid_argument("label_pose: rmsd must be non-negative");
  if (rmsd < kNearNativeRmsd)
    return PoseLabel::kPositive;
  if (rmsd > kDecoyRmsd)
    return PoseLabel::kNegative;
  return PoseLabel::kOmitted;
}

} // namespace dagat
