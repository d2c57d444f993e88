//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/synthetic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

namespace dagat {
namespace {

constexpr double kBondLength = 1.5;
constexpr double kMinNonbonded = 2.0;
constexpr double kMinIntermolecular = 2.5;
constexpr double kMaxReach = 7.5;

using Rng = std::mt19937_64;

Vec3 random_direction(Rng &rng) {
  std::normal_distribution<double> n(0, 1);
  for (;;) {
    Vec3 v { n(rng), n(rng), n(rng) };
    const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (len > 1e-6)
      return { v[0] / len, v[1] / len, v[2] / len };
  }
}

Vec3 step(const Vec3 &from, const Vec3 &dir, double len) {
  return { from[0] + dir[0] * len, from[1] + dir[1] * len,
           from[2] + dir[2] * len };
}

bool is_n_o(Element a, Element b) {
  return (a == Element::N && b == Element::O)
         || (a == Element::O && b == Element::N);
}

Element draw(Rng &rng, const std::vector<std::pair<Element, double>> &table) {
  std::uniform_real_distribution<double> u(0, 1);
  double x = u(rng);
  for (const auto &[e, w]: table) {
    if (x < w)
      return e;
    x -= w;
  }
  return table.front().first;
}

const std::vector<std::pair<Element, double>> kLigandElements {
  { Element::C, 0.55 }, { Element::N, 0.15 }, { Element::O, 0.15 },
  { Element::S, 0.05 }, { Element::F, 0.05 }, { Element::Cl, 0.05 },
};

const std::vector<std::pair<Element, double>> kProteinElements {
  { Element::C, 0.55 }, { Element::N, 0.2 }, { Element::O, 0.2 },
  { Element::S, 0.05 },
};

// Self-avoiding chain with roughly tetrahedral bond angles.
std::vector<Vec3> ligand_chain(std::size_t n, Rng &rng) {
  for (;;) {
    std::vector<Vec3> pts { Vec3 { 0, 0, 0 } };
    int tries = 0;
    while (pts.size() < n && tries < 200) {
      ++tries;
      const Vec3 p = step(pts.back(), random_direction(rng), kBondLength);
      bool ok = true;
      for (std::size_t k = 0; k + 1 < pts.size() && ok; ++k)
        ok = distance(p, pts[k]) >= (k + 2 == pts.size() ? 2.3 : kMinNonbonded);
      if (ok)
        pts.push_back(p);
    }
    if (pts.size() == n)
      return pts;
  }
}

double min_distance(const Vec3 &p, const std::vector<Vec3> &set,
                    std::size_t skip = static_cast<std::size_t>(-1)) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < set.size(); ++k)
    if (k != skip)
      best = std::min(best, distance(p, set[k]));
  return best;
}

// Short chains hugging the ligand; returns positions and chain bonds.
std::pair<std::vector<Vec3>, std::vector<std::pair<std::size_t, std::size_t>>>
protein_shell(const std::vector<Vec3> &lig, std::size_t n, Rng &rng) {
  std::uniform_int_distribution<std::size_t> anchor(0, lig.size() - 1);
  std::uniform_int_distribution<std::size_t> chain_len(3, 8);
  std::uniform_real_distribution<double> radius(3.0, 5.5);
  for (;;) {
    std::vector<Vec3> pts;
    std::vector<std::pair<std::size_t, std::size_t>> bonds;
    int tries = 0;
    while (pts.size() < n && tries < 5000) {
      const std::size_t len = std::min(chain_len(rng), n - pts.size());
      std::size_t prev = static_cast<std::size_t>(-1);
      for (std::size_t k = 0; k < len && tries < 5000;) {
        ++tries;
        const Vec3 p =
            prev == static_cast<std::size_t>(-1)
                ? step(lig[anchor(rng)], random_direction(rng), radius(rng))
                : step(pts[prev], random_direction(rng), kBondLength);
        const double to_lig = min_distance(p, lig);
        if (to_lig < kMinIntermolecular || to_lig > kMaxReach
            || min_distance(p, pts, prev) < kMinNonbonded)
          continue;
        pts.push_back(p);
        if (prev != static_cast<std::size_t>(-1))
          bonds.emplace_back(prev, pts.size() - 1);
        prev = pts.size() - 1;
        ++k;
      }
    }
    if (pts.size() == n)
      return { std::move(pts), std::move(bonds) };
  }
}

// Protein atoms in N/O contact with the ligand below the cutoff become C.
void clear_close_pairs(ComplexRecord &rec, std::size_t nl, double cutoff) {
  for (std::size_t i = 0; i < nl; ++i)
    for (std::size_t j = nl; j < rec.atoms.size(); ++j)
      if (is_n_o(rec.atoms[i].element, rec.atoms[j].element)
          && distance(rec.atoms[i].position, rec.atoms[j].position) < cutoff)
        rec.atoms[j].element = Element::C;
}

std::vector<std::pair<std::size_t, std::size_t>>
pairs_in_range(const ComplexRecord &rec, std::size_t nl, double lo,
               double hi) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < nl; ++i)
    for (std::size_t j = nl; j < rec.atoms.size(); ++j) {
      const double d = distance(rec.atoms[i].position, rec.atoms[j].position);
      if (d >= lo && d < hi)
        out.emplace_back(i, j);
    }
  return out;
}

void plant_pair(ComplexRecord &rec, std::pair<std::size_t, std::size_t> p,
                Rng &rng) {
  const bool ligand_n = std::bernoulli_distribution(0.5)(rng);
  rec.atoms[p.first].element = ligand_n ? Element::N : Element::O;
  rec.atoms[p.second].element = ligand_n ? Element::O : Element::N;
}

} // namespace

bool has_close_pair(const ComplexRecord &rec, double cutoff) {
  for (const Atom &a: rec.atoms) {
    if (!a.is_ligand)
      continue;
    for (const Atom &b: rec.atoms)
      if (!b.is_ligand && is_n_o(a.element, b.element)
          && distance(a.position, b.position) < cutoff)
        return true;
  }
  return false;
}

std::vector<ComplexRecord> generate_synthetic(const SyntheticOptions &opts) {
  if (opts.min_ligand_atoms < 2 || opts.min_ligand_atoms > opts.max_ligand_atoms
      || opts.min_protein_atoms < 1
      || opts.min_protein_atoms > opts.max_protein_atoms)
    throw std::invalid_argument("synthetic: bad atom count range");
  if (opts.num_proteins == 0)
    throw std::invalid_argument("synthetic: need at least one protein");
  if (!(opts.positive_fraction >= 0 && opts.positive_fraction <= 1))
    throw std::invalid_argument("synthetic: positive fraction not in [0, 1]");

  Rng rng(opts.seed);
  std::uniform_int_distribution<std::size_t> nl_dist(opts.min_ligand_atoms,
                                                     opts.max_ligand_atoms);
  std::uniform_int_distribution<std::size_t> np_dist(opts.min_protein_atoms,
                                                     opts.max_protein_atoms);
  std::bernoulli_distribution want_positive(opts.positive_fraction);
  std::bernoulli_distribution add_decoy(0.5);

  std::vector<ComplexRecord> out;
  out.reserve(opts.count);
  for (std::size_t c = 0; c < opts.count; ++c) {
    const std::size_t nl = nl_dist(rng);
    const std::size_t np = np_dist(rng);
    const bool positive = want_positive(rng);

    ComplexRecord rec;
    rec.complex_id = opts.id_prefix + "_" + std::to_string(c);
    rec.protein_id =
        opts.id_prefix + "_p" + std::to_string(c % opts.num_proteins);

    const std::vector<Vec3> lig = ligand_chain(nl, rng);
    auto [prot, prot_bonds] = protein_shell(lig, np, rng);
    for (const Vec3 &p: lig)
      rec.atoms.push_back(Atom { draw(rng, kLigandElements), p, true });
    for (const Vec3 &p: prot)
      rec.atoms.push_back(Atom { draw(rng, kProteinElements), p, false });
    for (std::size_t k = 0; k + 1 < nl; ++k)
      rec.bonds.push_back(Bond { k, k + 1, BondOrder::kSingle });
    for (auto [a, b]: prot_bonds)
      rec.bonds.push_back(Bond { nl + a, nl + b, BondOrder::kSingle });

    clear_close_pairs(rec, nl, opts.pair_cutoff);
    if (positive) {
      auto close = pairs_in_range(rec, nl, kMinIntermolecular, opts.pair_cutoff);
      if (!close.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, close.size() - 1);
        plant_pair(rec, close[pick(rng)], rng);
      }
    } else if (add_decoy(rng)) {
      auto near = pairs_in_range(rec, nl, opts.pair_cutoff, 5.0);
      if (!near.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, near.size() - 1);
        plant_pair(rec, near[pick(rng)], rng);
        clear_close_pairs(rec, nl, opts.pair_cutoff);
      }
    }

    annotate_from_bonds(rec.atoms, rec.bonds);
    rec.label = has_close_pair(rec, opts.pair_cutoff) ? 1 : 0;
    rec.category =
        *rec.label == 1 ? Category::kDudeActive : Category::kDudeInactive;
    out.push_back(std::move(rec));
  }
  return out;
}

} // namespace dagat
