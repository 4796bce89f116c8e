#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mixer/classes.hpp"
#include "mixer/group.hpp"

namespace mixer {

/// a[i][j][l] = #{(u, v) in C_i x C_j : uv = g_l} for the representative g_l.
struct StructureConstants {
  std::size_t k = 0;
  std::vector<std::uint64_t> values;

  std::uint64_t at(std::size_t i, std::size_t j, std::size_t l) const { return values[(i * k + j) * k + l]; }
};

StructureConstants structure_constants(const GroupTable& group, const ClassData& classes);

/// Complex character table lifted from exact data modulo the Dixon prime.
///
/// Row 0 is the trivial character. Rows are sorted by degree, then by values
/// in descending lexicographic order. Besides the complex values the table
/// keeps, per (character, class), the eigenvalue multiplicities of the
/// representing matrix: entry l counts exp(2 pi i l / o) where o is the
/// order of the class representative. These integers determine the values
/// exactly and let other modules reduce characters modulo other primes.
struct CharacterTable {
  std::string group;
  std::uint64_t order = 0;
  std::vector<std::uint64_t> class_sizes;
  std::vector<std::uint32_t> element_orders;
  std::uint64_t exponent = 1;
  std::uint64_t prime = 0;
  std::vector<std::uint64_t> degrees;
  std::vector<std::complex<double>> values;               // row-major k x k
  std::vector<std::vector<std::uint32_t>> multiplicities;  // row-major k x k
  double row_residual = 0.0;
  double column_residual = 0.0;

  std::size_t count() const { return degrees.size(); }
  std::complex<double> value(std::size_t chi, std::size_t cls) const { return values[chi * count() + cls]; }
  std::complex<double>& value(std::size_t chi, std::size_t cls) { return values[chi * count() + cls]; }
  const std::vector<std::uint32_t>& eigen_multiplicities(std::size_t chi, std::size_t cls) const {
    return multiplicities[chi * count() + cls];
  }
};

CharacterTable dixon_char_table(const ClassData& classes, const StructureConstants& constants,
                                std::string group_label = {});

struct OrthogonalityReport {
  double row_residual = 0.0;
  double column_residual = 0.0;
  double tolerance = 0.0;  // 1e-8 * |G|
  bool pass = false;
};

OrthogonalityReport verify_orthogonality(const CharacterTable& table, const ClassData& classes);

/// Sum over irreducible characters of chi(1)^(-s).
double witten_zeta(const CharacterTable& table, double s);

struct ZetaTrendRow {
  std::string group;
  std::uint64_t order = 0;
  std::size_t classes = 0;
  double zeta = 0.0;
  double excess = 0.0;      // zeta - 1
  double normalizer = 1.0;  // n^s for Alt/Sym, q^s for SL2/PSL2
  double normalized_excess = 0.0;
};

ZetaTrendRow zeta_trend_row(const GroupSpec& spec, const CharacterTable& table, double s);
std::vector<ZetaTrendRow> zeta_trend(const std::vector<GroupSpec>& family, double s);

/// Everything derived from one group spec, built in dependency order.
struct GroupData {
  GroupTable group;
  ClassData classes;
  CharacterTable table;
};

GroupData build_group_data(const GroupSpec& spec);

}  // namespace mixer
