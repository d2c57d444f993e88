//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/chem.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "dagat/binary_io.h"

namespace dagat {
namespace {

struct ElementInfo {
  Element element;
  std::string_view symbol;
  int valence;
  double radius;
};

// Covalent radii: Cordero et al. single-bond values (C sp3).
constexpr std::array<ElementInfo, kNumElements> kElements { {
    { Element::C, "C", 4, 0.76 },
    { Element::N, "N", 3, 0.71 },
    { Element::O, "O", 2, 0.66 },
    { Element::S, "S", 2, 1.05 },
    { Element::F, "F", 1, 0.57 },
    { Element::P, "P", 3, 1.07 },
    { Element::Cl, "Cl", 1, 1.02 },
    { Element::Br, "Br", 1, 1.20 },
    { Element::B, "B", 3, 0.84 },
    { Element::H, "H", 1, 0.31 },
} };

constexpr std::array<std::pair<Category, std::string_view>, 5> kCategoryNames {
  { { Category::kDudeActive, "dude_active" },
    { Category::kDudeInactive, "dude_inactive" },
    { Category::kPdbbindPositive, "pdbbind_positive" },
    { Category::kPdbbindNegative, "pdbbind_negative" },
    { Category::kUnlabeled, "unlabeled" } }
};

const ElementInfo &info(Element e) {
  return kElements[static_cast<std::size_t>(e)];
}

} // namespace

std::optional<Element> parse_element(std::string_view symbol) {
  // Accept any capitalization ("CL", "cl", "Cl").
  std::string norm(symbol);
  for (std::size_t i = 0; i < norm.size(); ++i)
    norm[i] = static_cast<char>(
        i == 0 ? std::toupper(static_cast<unsigned char>(norm[i]))
               : std::tolower(static_cast<unsigned char>(norm[i])));
  for (const auto &e: kElements)
    if (e.symbol == norm)
      return e.element;
  return std::nullopt;
}

std::string_view element_symbol(Element e) {
  return info(e).symbol;
}

int standard_valence(Element e) {
  return info(e).valence;
}

double covalent_radius(Element e) {
  return info(e).radius;
}

double distance(const Vec3 &a, const Vec3 &b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::string_view category_name(Category c) {
  for (const auto &[cat, name]: kCategoryNames)
    if (cat == c)
      return name;
  return "unlabeled";
}

std::optional<Category> parse_category(std::string_view name) {
  for (const auto &[cat, n]: kCategoryNames)
    if (n == name)
      return cat;
  return std::nullopt;
}

std::size_t ComplexRecord::num_ligand_atoms() const {
  return static_cast<std::size_t>(
      std::count_if(atoms.begin(), atoms.end(),
                    [](const Atom &a) { return a.is_ligand; }));
}

std::size_t ComplexRecord::num_protein_atoms() const {
  return atoms.size() - num_ligand_atoms();
}

ParseError::ParseError(const std::string &source, std::size_t line,
                       const std::string &what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
      line_(line) { }

void validate(const ComplexRecord &rec) {
  const std::string where = "record '" + rec.complex_id + "': ";
  if (rec.num_ligand_atoms() == 0)
    throw InvalidRecord(where + "no ligand atoms");
  if (rec.num_protein_atoms() == 0)
    throw InvalidRecord(where + "no protein atoms");
  for (std::size_t k = 0; k < rec.atoms.size(); ++k) {
    const Atom &a = rec.atoms[k];
    for (double c: a.position)
      if (!std::isfinite(c))
        throw InvalidRecord(where + "non-finite coordinate on atom "
                            + std::to_string(k));
    if (a.degree < 0 || a.num_hydrogens < 0 || a.implicit_valence < 0)
      throw InvalidRecord(where + "negative annotation on atom "
                          + std::to_string(k));
  }
  for (const Bond &b: rec.bonds) {
    if (b.i >= rec.atoms.size() || b.j >= rec.atoms.size())
      throw InvalidRecord(where + "bond index out of range");
    if (b.i == b.j)
      throw InvalidRecord(where + "self-bond on atom " + std::to_string(b.i));
    if (rec.atoms[b.i].is_ligand != rec.atoms[b.j].is_ligand)
      throw InvalidRecord(where + "bond crosses ligand/protein boundary");
  }
  if (rec.label && *rec.label != 0 && *rec.label != 1)
    throw InvalidRecord(where + "label must be 0 or 1");
  if (rec.rmsd && !(*rec.rmsd >= 0))
    throw InvalidRecord(where + "rmsd must be non-negative");
}

ComplexRecord parse_record_json(std::string_view line,
                                const std::string &source,
                                std::size_t line_no, IngestStats *stats) {
  using nlohmann::json;
  ComplexRecord rec;
  constexpr auto kDropped = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap;
  try {
    const json j = json::parse(line);
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion)
      throw ParseError(source, line_no,
                       "unsupported schema_version " + std::to_string(version));
    rec.complex_id = j.at("complex_id").get<std::string>();
    rec.protein_id = j.at("protein_id").get<std::string>();
    const auto cat = parse_category(j.at("category").get<std::string>());
    if (!cat)
      throw ParseError(source, line_no,
                       "unknown category " + j.at("category").dump());
    rec.category = *cat;
    if (j.contains("label") && !j["label"].is_null())
      rec.label = j["label"].get<int>();
    if (j.contains("rmsd") && !j["rmsd"].is_null())
      rec.rmsd = j["rmsd"].get<double>();

    for (const json &ja: j.at("atoms")) {
      Atom a;
      const auto symbol = ja.at("element").get<std::string>();
      const auto e = parse_element(symbol);
      if (!e) {
        remap.push_back(kDropped);
        if (stats)
          ++stats->dropped_atoms;
        continue;
      }
      a.element = *e;
      const auto &xyz = ja.at("xyz");
      if (xyz.size() != 3)
        throw ParseError(source, line_no, "xyz must have 3 components");
      for (std::size_t k = 0; k < 3; ++k)
        a.position[k] = xyz[k].get<double>();
      a.is_ligand = ja.at("ligand").get<bool>();
      a.degree = ja.at("degree").get<int>();
      a.num_hydrogens = ja.at("num_h").get<int>();
      a.implicit_valence = ja.at("implicit_valence").get<int>();
      a.aromatic = ja.at("aromatic").get<bool>();
      remap.push_back(rec.atoms.size());
      rec.atoms.push_back(a);
    }
    for (const json &jb: j.at("bonds")) {
      if (jb.size() != 3)
        throw ParseError(source, line_no, "bond must be [i, j, order]");
      const int order = jb[2].get<int>();
      if (order < 1 || order > 4)
        throw ParseError(source, line_no,
                         "bond order must be 1..4, got "
                             + std::to_string(order));
      const auto i = jb[0].get<std::size_t>();
      const auto k = jb[1].get<std::size_t>();
      if (i >= remap.size() || k >= remap.size())
        throw ParseError(source, line_no, "bond index out of range");
      if (remap[i] == kDropped || remap[k] == kDropped)
        continue;
      rec.bonds.push_back(
          Bond { remap[i], remap[k], static_cast<BondOrder>(order) });
    }
  } catch (const json::exception &e) {
    throw ParseError(source, line_no, e.what());
  }
  try {
    validate(rec);
  } catch (const InvalidRecord &e) {
    throw ParseError(source, line_no, e.what());
  }
  return rec;
}

std::string to_json_line(const ComplexRecord &rec) {
  using nlohmann::json;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["complex_id"] = rec.complex_id;
  j["protein_id"] = rec.protein_id;
  j["category"] = std::string(category_name(rec.category));
  j["label"] = rec.label ? json(*rec.label) : json(nullptr);
  j["rmsd"] = rec.rmsd ? json(*rec.rmsd) : json(nullptr);
  json atoms = json::array();
  for (const Atom &a: rec.atoms) {
    atoms.push_back({
        { "element", std::string(element_symbol(a.element)) },
        { "xyz", { a.position[0], a.position[1], a.position[2] } },
        { "ligand", a.is_ligand },
        { "degree", a.degree },
        { "num_h", a.num_hydrogens },
        { "implicit_valence", a.implicit_valence },
        { "aromatic", a.aromatic },
    });
  }
  j["atoms"] = std::move(atoms);
  json bonds = json::array();
  for (const Bond &b: rec.bonds)
    bonds.push_back({ b.i, b.j, static_cast<int>(b.order) });
  j["bonds"] = std::move(bonds);
  return j.dump();
}

std::vector<ComplexRecord> read_jsonl(const std::filesystem::path &path,
                                      IngestStats *lenient) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::vector<ComplexRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); }))
      continue;
    if (lenient == nullptr) {
      out.push_back(parse_record_json(line, path.string(), line_no));
      continue;
    }
    ++lenient->records_read;
    try {
      out.push_back(parse_record_json(line, path.string(), line_no, lenient));
    } catch (const ParseError &e) {
      ++lenient->records_rejected;
      lenient->rejected.emplace_back(e.what());
    }
  }
  return out;
}

void write_jsonl(const std::filesystem::path &path,
                 const std::vector<ComplexRecord> &records) {
  std::string text;
  for (const auto &r: records) {
    text += to_json_line(r);
    text += '\n';
  }
  atomic_write_file(path, text);
}

void annotate_from_bonds(std::vector<Atom> &atoms,
                         const std::vector<Bond> &bonds) {
  std::vector<double> order_sum(atoms.size(), 0.0);
  for (Atom &a: atoms) {
    a.degree = 0;
    a.num_hydrogens = 0;
    a.aromatic = false;
  }
  for (const Bond &b: bonds) {
    const double w = b.order == BondOrder::kAromatic
                         ? 1.5
                         : static_cast<double>(static_cast<int>(b.order));
    for (auto [self, other]: { std::pair { b.i, b.j }, std::pair { b.j, b.i } }) {
      Atom &a = atoms[self];
      ++a.degree;
      if (atoms[other].element == Element::H)
        ++a.num_hydrogens;
      if (b.order == BondOrder::kAromatic)
        a.aromatic = true;
      order_sum[self] += w;
    }
  }
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const int used = static_cast<int>(std::floor(order_sum[k]));
    atoms[k].implicit_valence =
        std::max(0, standard_valence(atoms[k].element) - used);
  }
}

} // namespace dagat
