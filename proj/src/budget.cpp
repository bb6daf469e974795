#include "cgk/budget.hpp"

#include <cstdlib>
#include <string>

#include "cgk/errors.hpp"

namespace cgk {

std::uint64_t default_budget() {
  if (const char* env = std::getenv("CGK_BUDGET")) {
    try {
      const unsigned long long v = std::stoull(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
      // fall through to the default
    }
  }
  return kDefaultBudget;
}

void BudgetMeter::charge(std::uint64_t n) {
  used_ += n;
  if (used_ > limit_)
    throw BudgetExceeded("enumeration budget exceeded (" + std::to_string(limit_) + " candidates)");
}

}  // namespace cgk
