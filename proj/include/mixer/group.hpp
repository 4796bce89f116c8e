#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixer/config.hpp"
#include "mixer/finite_field.hpp"
#include "mixer/random.hpp"

namespace mixer {

enum class GroupKind { alternating, symmetric, sl2, psl2, generated_perm, generated_mat2 };

using Permutation = std::vector<std::uint16_t>;     // 0-based image array
using Matrix2 = std::array<std::uint32_t, 4>;       // row-major field elements

struct GroupSpec {
  GroupKind kind = GroupKind::alternating;
  std::uint32_t degree = 0;  // n for Alt/Sym and generated permutation groups
  std::uint32_t q = 0;       // field size for matrix groups
  std::vector<Permutation> perm_generators;
  std::vector<Matrix2> mat_generators;
  FiniteFieldSpec field;
  std::uint64_t max_order = kDefaultMaxOrder;
  std::string text;  // spec string the group was parsed from, if any

  static GroupSpec alternating(std::uint32_t n);
  static GroupSpec symmetric(std::uint32_t n);
  static GroupSpec sl2(std::uint32_t q);
  static GroupSpec psl2(std::uint32_t q);
  static GroupSpec generated(std::vector<Permutation> generators, std::uint32_t degree);
  static GroupSpec generated(std::vector<Matrix2> generators, FiniteFieldSpec field);

  /// Short label such as "A:5" or "PSL2:7".
  std::string label() const;
  /// |G| from the closed formula for the named families.
  std::optional<std::uint64_t> predicted_order() const;
  /// Throws UnsupportedParameters for out-of-range parameters.
  void validate() const;
};

using Index = std::uint32_t;
inline constexpr Index kNoIndex = 0xffffffffU;

/// Canonical element value tagged with the table it came from.
struct Element {
  std::uint64_t group_id = 0;
  std::vector<std::uint16_t> entries;

  bool operator==(const Element&) const = default;
};

namespace detail {
class Engine;
class KeyIndex;
}  // namespace detail

/// A fully enumerated finite group.
///
/// Elements are stored flat, `width()` entries each. Index 0 is the identity;
/// the remaining elements follow in lexicographic order of their canonical
/// entries, so the layout is a pure function of the spec. Immutable after
/// build() and safe to share between threads.
class GroupTable {
 public:
  static GroupTable build(const GroupSpec& spec);

  GroupTable(GroupTable&&) noexcept;
  GroupTable& operator=(GroupTable&&) noexcept;
  ~GroupTable();

  std::uint64_t id() const { return id_; }
  const GroupSpec& spec() const { return spec_; }
  Index order() const { return order_; }
  Index identity() const { return 0; }
  const std::vector<Index>& generators() const { return generators_; }
  /// Generators closed up to the trivial group.
  bool degenerate() const { return degenerate_; }
  std::size_t width() const { return width_; }
  bool is_permutation_group() const;
  /// Field of a matrix group; null for permutation groups.
  const FiniteField* field() const;

  std::span<const std::uint16_t> entries(Index i) const {
    return {data_.data() + static_cast<std::size_t>(i) * width_, width_};
  }
  Element element(Index i) const;

  std::optional<Index> find(std::span<const std::uint16_t> entries) const;
  /// Canonicalizes `entries` first; throws InvalidArgument if not in the group.
  Index index_of_raw(std::vector<std::uint16_t> entries) const;
  /// Throws MixedGroups if `e` belongs to another table.
  Index index_of(const Element& e) const;

  Index mul(Index a, Index b) const;
  Index inv(Index a) const { return inverse_[a]; }
  Index conj(Index g, Index h) const { return mul(mul(h, g), inverse_[h]); }  // h g h^-1
  Index pow(Index g, std::uint64_t m) const;
  std::uint32_t element_order(Index g) const;

  Element mul(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;

  Index random_element(RandomStream& stream) const {
    return static_cast<Index>(stream.uniform_index(order_));
  }

  /// Canonical bytes, hex encoded (one byte per entry, two when q > 256).
  std::string hex(Index i) const;
  /// Cycle notation (1-based points) or "[a,b;c,d]".
  std::string describe(Index i) const;

 private:
  GroupTable();

  std::uint64_t id_ = 0;
  GroupSpec spec_;
  std::shared_ptr<const detail::Engine> engine_;
  std::unique_ptr<detail::KeyIndex> lookup_;
  std::size_t width_ = 0;
  Index order_ = 0;
  bool degenerate_ = false;
  std::vector<std::uint16_t> data_;
  std::vector<Index> inverse_;
  std::vector<Index> generators_;
  std::vector<Index> mul_table_;  // order^2 entries for small groups
};

/// Canonical entries of a cycle-notation permutation on `degree` points,
/// e.g. "(1 2 3)(4 5)". Throws SpecSyntax on malformed input.
Permutation parse_cycles(const std::string& text, std::uint32_t degree);

}  // namespace mixer
