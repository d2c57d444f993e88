//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_CHEM_H_
#define DAGAT_CHEM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dagat {

// The ten supported elements, in one-hot slot order.
enum class Element : std::uint8_t { C, N, O, S, F, P, Cl, Br, B, H };

inline constexpr std::size_t kNumElements = 10;

std::optional<Element> parse_element(std::string_view symbol);
std::string_view element_symbol(Element e);
int standard_valence(Element e);
// Single-bond covalent radius in angstrom.
double covalent_radius(Element e);

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

using Vec3 = std::array<double, 3>;

double distance(const Vec3 &a, const Vec3 &b);

struct Atom {
  Element element = Element::C;
  Vec3 position {};
  bool is_ligand = false;
  int degree = 0;
  int num_hydrogens = 0;
  int implicit_valence = 0;
  bool aromatic = false;

  bool operator==(const Atom &) const = default;
};

struct Bond {
  std::size_t i = 0;
  std::size_t j = 0;
  BondOrder order = BondOrder::kSingle;

  bool operator==(const Bond &) const = default;
};

enum class Category : std::uint8_t {
  kDudeActive,
  kDudeInactive,
  kPdbbindPositive,
  kPdbbindNegative,
  kUnlabeled,
};

inline constexpr std::array<Category, 4> kTrainingCategories {
  Category::kDudeActive, Category::kDudeInactive, Category::kPdbbindPositive,
  Category::kPdbbindNegative
};

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

struct ComplexRecord {
  std::string complex_id;
  std::string protein_id;
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::optional<int> label;
  Category category = Category::kUnlabeled;
  std::optional<double> rmsd;

  std::size_t num_ligand_atoms() const;
  std::size_t num_protein_atoms() const;

  bool operator==(const ComplexRecord &) const = default;
};

class ParseError: public std::runtime_error {
public:
  ParseError(const std::string &source, std::size_t line,
             const std::string &what);

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Raised when a record is well-formed but violates a ComplexRecord invariant.
class InvalidRecord: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct IngestStats {
  std::size_t dropped_atoms = 0;
  std::size_t records_read = 0;
  std::size_t records_rejected = 0;
  // "<id>: <reason>" for each rejected record.
  std::vector<std::string> rejected;
};

// Throws InvalidRecord: no ligand or protein atoms, non-finite coordinates,
// out-of-range bond indices, self-bonds, cross-molecule bonds, label not in
// {0,1}, negative annotations or rmsd.
void validate(const ComplexRecord &rec);

// Canonical JSON-lines format; see docs/formats.md.
inline constexpr int kSchemaVersion = 1;

// Atoms with unsupported elements are dropped along with their bonds and
// counted in `stats`.
ComplexRecord parse_record_json(std::string_view line,
                                const std::string &source = "<string>",
                                std::size_t line_no = 1,
                                IngestStats *stats = nullptr);
std::string to_json_line(const ComplexRecord &rec);

// Reads every non-blank line. A malformed or invalid line throws ParseError
// naming it, unless `lenient` is given: then the line is skipped and recorded
// there.
std::vector<ComplexRecord> read_jsonl(const std::filesystem::path &path,
                                      IngestStats *lenient = nullptr);
void write_jsonl(const std::filesystem::path &path,
                 const std::vector<ComplexRecord> &records);

struct SdfPdbOptions {
  std::string protein_id;
  Category category = Category::kUnlabeled;
  std::optional<int> label;
  // Distance factor applied to summed covalent radii when inferring protein
  // bonds.
  double bond_tolerance = 1.3;
};

// One record per molecule in the SDF, each paired with the same protein.
// SD data items "label" and "rmsd" (if present) override the options.
std::vector<ComplexRecord> read_sdf_pdb(const std::filesystem::path &sdf,
                                        const std::filesystem::path &pdb,
                                        const SdfPdbOptions &opts,
                                        IngestStats *stats = nullptr);

// Lower-level pieces, exposed for tests.
struct LigandMolecule {
  std::string name;
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::optional<int> label;
  std::optional<double> rmsd;
};

std::vector<LigandMolecule> parse_sdf(std::string_view text,
                                      const std::string &source,
                                      IngestStats *stats = nullptr);

struct ProteinStructure {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
};

ProteinStructure parse_pdb(std::string_view text, const std::string &source,
                           double bond_tolerance = 1.3,
                           IngestStats *stats = nullptr);

// Fills degree, num_hydrogens, implicit_valence and aromatic from the bond
// list. Aromatic bonds count 1.5 towards the bond-order sum.
void annotate_from_bonds(std::vector<Atom> &atoms,
                         const std::vector<Bond> &bonds);

} // namespace dagat

#endif // DAGAT_CHEM_H_
