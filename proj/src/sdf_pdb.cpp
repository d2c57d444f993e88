//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Minimal SDF V2000 and PDB readers. Only the columns listed in
// docs/formats.md are consumed; everything else is ignored.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dagat/chem.h"

namespace dagat {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// 0-based [begin, begin + len) clipped to the line.
std::string_view column(std::string_view line, std::size_t begin,
                        std::size_t len) {
  if (begin >= line.size())
    return {};
  return line.substr(begin, len);
}

template <class T>
bool parse_number(std::string_view field, T &out) {
  field = trim(field);
  if (field.empty())
    return false;
  if (field.front() == '+')
    field.remove_prefix(1);
  const auto *end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos)
      break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char &c: out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Parses one molecule starting at lines[first]; returns the index one past
// its "$$$$" terminator (or the end of input).
std::size_t parse_sdf_record(const std::vector<std::string_view> &lines,
                             std::size_t first, const std::string &source,
                             LigandMolecule &mol, IngestStats *stats) {
  auto fail = [&](std::size_t idx, const std::string &what) -> ParseError {
    return ParseError(source, idx + 1, what);
  };
  if (first + 4 > lines.size())
    throw fail(first, "truncated molfile header");

  mol.name = std::string(trim(lines[first]));
  const std::size_t counts_idx = first + 3;
  const std::string_view counts = lines[counts_idx];
  if (counts.find("V3000") != std::string_view::npos)
    throw fail(counts_idx, "V3000 molfiles are not supported");

  int natoms = 0, nbonds = 0;
  if (!parse_number(column(counts, 0, 3), natoms)
      || !parse_number(column(counts, 3, 3), nbonds) || natoms < 0
      || nbonds < 0)
    throw fail(counts_idx, "malformed counts line");

  std::size_t idx = counts_idx + 1;
  // Input atom number -> kept index, or -1 when dropped.
  std::vector<long> remap(static_cast<std::size_t>(natoms), -1);
  for (int k = 0; k < natoms; ++k, ++idx) {
    if (idx >= lines.size())
      throw fail(idx, "atom block truncated");
    const std::string_view line = lines[idx];
    Atom a;
    a.is_ligand = true;
    if (!parse_number(column(line, 0, 10), a.position[0])
        || !parse_number(column(line, 10, 10), a.position[1])
        || !parse_number(column(line, 20, 10), a.position[2]))
      throw fail(idx, "malformed atom coordinates");
    const std::string_view symbol = trim(column(line, 31, 3));
    if (symbol.empty())
      throw fail(idx, "missing atom symbol");
    const auto element = parse_element(symbol);
    if (!element) {
      if (stats)
        ++stats->dropped_atoms;
      continue;
    }
    a.element = *element;
    remap[static_cast<std::size_t>(k)] = static_cast<long>(mol.atoms.size());
    mol.atoms.push_back(a);
  }

  for (int k = 0; k < nbonds; ++k, ++idx) {
    if (idx >= lines.size())
      throw fail(idx, "bond block truncated");
    const std::string_view line = lines[idx];
    int a = 0, b = 0, type = 0;
    if (!parse_number(column(line, 0, 3), a)
        || !parse_number(column(line, 3, 3), b)
        || !parse_number(column(line, 6, 3), type))
      throw fail(idx, "malformed bond line");
    if (a < 1 || b < 1 || a > natoms || b > natoms || a == b)
      throw fail(idx, "bond atom index out of range");
    if (type < 1 || type > 4)
      throw fail(idx, "unsupported bond type " + std::to_string(type));
    const long ia = remap[static_cast<std::size_t>(a - 1)];
    const long ib = remap[static_cast<std::size_t>(b - 1)];
    if (ia < 0 || ib < 0)
      continue;
    mol.bonds.push_back(Bond { static_cast<std::size_t>(ia),
                               static_cast<std::size_t>(ib),
                               static_cast<BondOrder>(type) });
  }

  // Properties block, then SD data items up to "$$$$".
  for (; idx < lines.size(); ++idx) {
    const std::string_view line = lines[idx];
    if (trim(line) == "$$$$")
      return idx + 1;
    if (line.empty() || line.front() != '>')
      continue;
    const auto open = line.find('<');
    const auto close = line.find('>', open == std::string_view::npos ? 0 : open);
    if (open == std::string_view::npos || close == std::string_view::npos)
      continue;
    const std::string key = lower(line.substr(open + 1, close - open - 1));
    if (idx + 1 >= lines.size())
      break;
    const std::string_view value = trim(lines[idx + 1]);
    if (key == "label") {
      int v = 0;
      if (!parse_number(value, v) || (v != 0 && v != 1))
        throw fail(idx + 1, "label must be 0 or 1");
      mol.label = v;
    } else if (key == "rmsd") {
      double v = 0;
      if (!parse_number(value, v) || v < 0)
        throw fail(idx + 1, "rmsd must be a non-negative number");
      mol.rmsd = v;
    }
  }
  return lines.size();
}

} // namespace

std::vector<LigandMolecule> parse_sdf(std::string_view text,
                                      const std::string &source,
                                      IngestStats *stats) {
  const auto lines = split_lines(text);
  std::vector<LigandMolecule> out;
  std::size_t idx = 0;
  while (idx < lines.size()) {
    // Skip blank padding between records / at end of file.
    if (trim(lines[idx]).empty()) {
      bool rest_blank = true;
      for (std::size_t k = idx; k < lines.size() && rest_blank; ++k)
        rest_blank = trim(lines[k]).empty();
      if (rest_blank)
        break;
    }
    LigandMolecule mol;
    idx = parse_sdf_record(lines, idx, source, mol, stats);
    annotate_from_bonds(mol.atoms, mol.bonds);
    out.push_back(std::move(mol));
  }
  return out;
}

ProteinStructure parse_pdb(std::string_view text, const std::string &source,
                           double bond_tolerance, IngestStats *stats) {
  ProteinStructure prot;
  const auto lines = split_lines(text);
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    const std::string_view line = lines[idx];
    const std::string_view record = trim(column(line, 0, 6));
    if (record == "ENDMDL" || record == "END")
      break;
    if (record != "ATOM" && record != "HETATM")
      continue;
    Atom a;
    if (!parse_number(column(line, 30, 8), a.position[0])
        || !parse_number(column(line, 38, 8), a.position[1])
        || !parse_number(column(line, 46, 8), a.position[2]))
      throw ParseError(source, idx + 1, "malformed ATOM/HETATM coordinates");

    std::string_view symbol = trim(column(line, 76, 2));
    std::string from_name;
    if (symbol.empty()) {
      // Fall back to the atom name: right-justified two-letter elements start
      // in column 13, one-letter elements in column 14.
      const std::string_view name = column(line, 12, 4);
      if (name.size() >= 2
          && (name.substr(0, 2) == "CL" || name.substr(0, 2) == "BR"))
        from_name = std::string(name.substr(0, 2));
      else
        for (char c: name)
          if (std::isalpha(static_cast<unsigned char>(c))) {
            from_name = std::string(1, c);
            break;
          }
      symbol = from_name;
    }
    const auto element = parse_element(symbol);
    if (!element) {
      if (stats)
        ++stats->dropped_atoms;
      continue;
    }
    a.element = *element;
    a.is_ligand = false;
    prot.atoms.push_back(a);
  }

  const std::size_t n = prot.atoms.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Atom &ai = prot.atoms[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Atom &aj = prot.atoms[j];
      const double limit = bond_tolerance
                           * (covalent_radius(ai.element)
                              + covalent_radius(aj.element));
      if (distance(ai.position, aj.position) < limit)
        prot.bonds.push_back(Bond { i, j, BondOrder::kSingle });
    }
  }
  annotate_from_bonds(prot.atoms, prot.bonds);
  return prot;
}

std::vector<ComplexRecord> read_sdf_pdb(const std::filesystem::path &sdf,
                                        const std::filesystem::path &pdb,
                                        const SdfPdbOptions &opts,
                                        IngestStats *stats) {
  const auto ligands = parse_sdf(read_file(sdf), sdf.string(), stats);
  const auto protein =
      parse_pdb(read_file(pdb), pdb.string(), opts.bond_tolerance, stats);

  std::vector<ComplexRecord> out;
  const std::string stem = sdf.stem().string();
  for (std::size_t k = 0; k < ligands.size(); ++k) {
    const LigandMolecule &lig = ligands[k];
    ComplexRecord rec;
    rec.complex_id = ligands.size() == 1 ? stem : stem + "_" + std::to_string(k);
    rec.protein_id = opts.protein_id.empty() ? pdb.stem().string()
                                             : opts.protein_id;
    rec.category = opts.category;
    rec.label = lig.label ? lig.label : opts.label;
    rec.rmsd = lig.rmsd;
    rec.atoms = lig.atoms;
    rec.bonds = lig.bonds;
    const std::size_t offset = rec.atoms.size();
    rec.atoms.insert(rec.atoms.end(), protein.atoms.begin(),
                     protein.atoms.end());
    for (const Bond &b: protein.bonds)
      rec.bonds.push_back(Bond { b.i + offset, b.j + offset, b.order });
    if (stats)
      ++stats->records_read;
    try {
      validate(rec);
    } catch (const InvalidRecord &e) {
      if (!stats)
        throw;
      ++stats->records_rejected;
      stats->rejected.emplace_back(e.what());
      continue;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

} // namespace dagat
