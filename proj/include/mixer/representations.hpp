#pragma once

#include <cstdint>
#include <vector>

#include "mixer/characters.hpp"
#include "mixer/classes.hpp"
#include "mixer/group.hpp"

namespace mixer {

/// One irreducible representation realized over GF(P): a d x d matrix
/// (row-major) for every element index.
struct ModularRepresentation {
  std::uint64_t degree = 0;
  std::vector<std::uint64_t> matrices;  // order * d * d

  const std::uint64_t* matrix(Index g) const { return matrices.data() + static_cast<std::size_t>(g) * degree * degree; }
};

/// All irreducible representations of G over GF(P), P prime with
/// P = 1 mod exponent(G).
///
/// Each representation is cut out of the regular representation as the left
/// ideal F[G] e_chi eps_lambda, where e_chi is the central idempotent of chi
/// and eps_lambda the idempotent of a linear character lambda of a cyclic
/// subgroup <x>, chosen with the least multiplicity m in chi restricted to
/// <x> (read off the eigenvalue multiplicities of the table). When m > 1 the
/// ideal is a sum of m copies and one is split off by an eigenspace of right
/// multiplication by eps y eps. Traces and the homomorphism property on
/// generators are verified.
struct ModularIrreps {
  std::uint64_t prime = 0;
  std::vector<ModularRepresentation> reps;  // in character-table row order
  /// chi(g) mod P for every character (row) and class.
  std::vector<std::vector<std::uint64_t>> characters;
};

/// Throws NoRepresentation when no splitting element separates a copy, or
/// when the group is too large for dense regular vectors.
ModularIrreps build_modular_irreps(const GroupTable& group, const ClassData& classes, const CharacterTable& table,
                                   std::uint64_t prime);

/// Reduces the complex table modulo P through its eigenvalue multiplicities.
std::vector<std::vector<std::uint64_t>> reduce_characters(const CharacterTable& table, std::uint64_t prime);

}  // namespace mixer
