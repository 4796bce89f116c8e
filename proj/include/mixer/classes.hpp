#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mixer/group.hpp"

namespace mixer {

/// Conjugacy classes of a GroupTable.
///
/// Class 0 is the identity class. Classes are numbered by their
/// representative, which is the smallest element index in the class (and so
/// the lexicographically least canonical element for every class but the
/// identity's).
struct ClassData {
  std::vector<Index> representatives;
  std::vector<std::uint64_t> sizes;
  std::vector<std::uint32_t> class_of;        // element index -> class
  std::vector<std::uint64_t> centralizer_orders;
  std::vector<std::uint32_t> element_orders;  // order of the representative
  std::vector<std::uint32_t> inverse_class;
  // power_maps[j][m] = class of rep_j^m for 0 <= m < element_orders[j].
  std::vector<std::vector<std::uint32_t>> power_maps;
  std::uint64_t exponent = 1;
  std::uint64_t group_order = 0;

  // Members of every class, concatenated; class j occupies
  // [member_offsets[j], member_offsets[j+1]).
  std::vector<Index> members;
  std::vector<std::size_t> member_offsets;

  std::size_t count() const { return sizes.size(); }

  /// pi_m(j) for any m >= 0 (reduced modulo the element order).
  std::uint32_t power_class(std::uint32_t cls, std::uint64_t m) const {
    return power_maps[cls][m % element_orders[cls]];
  }

  std::span<const Index> class_members(std::uint32_t cls) const {
    return {members.data() + member_offsets[cls], members.data() + member_offsets[cls + 1]};
  }
};

/// Orbits of conjugation by the generators, with power and inverse maps.
ClassData conj_classes(const GroupTable& group);

}  // namespace mixer
