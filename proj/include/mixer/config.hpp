#pragma once

#include <cstdint>

namespace mixer {

inline constexpr std::uint64_t kDefaultMaxOrder = 2'000'000;
inline constexpr std::uint64_t kDefaultLoopBudget = 1'000'000'000;

/// Enumeration cap: MIXER_MAX_ORDER when set, kDefaultMaxOrder otherwise.
std::uint64_t default_max_order();
/// Brute-force loop budget: MIXER_LOOP_BUDGET when set, kDefaultLoopBudget otherwise.
std::uint64_t default_loop_budget();

}  // namespace mixer
