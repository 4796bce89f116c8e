#pragma once

#include <cstdint>
#include <string>

#include "mixer/classes.hpp"
#include "mixer/config.hpp"
#include "mixer/group.hpp"

namespace mixer {

/// Grammar: A:<n>, S:<n>, SL2:<q>, PSL2:<q>, permgen:<file>, matgen:<file>,q=<q>.
/// Generator files hold one generator per line: cycle notation for
/// permutations, four comma-separated field elements for matrices.
/// Throws SpecSyntax, UnsupportedParameters or IoError. The result is validated.
GroupSpec parse_spec(const std::string& text, std::uint64_t max_order = default_max_order());

/// Element syntax: a decimal table index, "e" for the identity, cycle
/// notation "(1 2 3)", a matrix "a,b,c,d" or "[a,b;c,d]", or "hex:<bytes>".
Index parse_element(const std::string& text, const GroupTable& group);

/// A decimal class index, or any element syntax naming a member of the class.
std::uint32_t parse_class(const std::string& text, const GroupTable& group, const ClassData& classes);

}  // namespace mixer
