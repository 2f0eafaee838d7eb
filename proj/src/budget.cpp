#include "modsep/budget.hpp"

#include <cstdlib>
#include <limits>

namespace modsep {

Budget Budget::from_env() {
  if (const char* env = std::getenv("MODSEP_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return Budget(v);
  }
  return Budget();
}

Budget& Budget::unlimited() {
  static thread_local Budget b(std::numeric_limits<std::uint64_t>::max() / 2);
  return b;
}

}  // namespace modsep
