#include "mixer/config.hpp"

#include <cstdlib>

namespace mixer {

namespace {
std::uint64_t env_or(const char* name, std::uint64_t fallback) {
  if (const char* env = std::getenv(name)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return fallback;
}
}  // namespace

std::uint64_t default_max_order() { return env_or("MIXER_MAX_ORDER", kDefaultMaxOrder); }
std::uint64_t default_loop_budget() { return env_or("MIXER_LOOP_BUDGET", kDefaultLoopBudget); }

}  // namespace mixer
