#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace modsep {

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Work counter shared by the expensive constructions and searches.
class Budget {
 public:
  static constexpr std::uint64_t kDefaultLimit = 50'000'000;

  explicit Budget(std::uint64_t limit = kDefaultLimit) : limit_(limit) {}

  void charge(std::uint64_t units = 1) {
    used_ += units;
    if (used_ > limit_) throw BudgetExceeded("work budget of " + std::to_string(limit_) + " units exhausted");
  }
  bool exhausted() const { return used_ > limit_; }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

  // Limit from MODSEP_BUDGET when set, otherwise the default.
  static Budget from_env();
  // Shared effectively unlimited instance for callers that do not care.
  static Budget& unlimited();

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

}  // namespace modsep
