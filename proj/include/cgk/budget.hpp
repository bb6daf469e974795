#pragma once

#include <cstdint>

namespace cgk {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// kDefaultBudget unless the CGK_BUDGET environment variable holds a positive integer.
std::uint64_t default_budget();

/// Counts the candidates an enumeration examines and throws BudgetExceeded
/// once the limit is crossed.
class BudgetMeter {
 public:
  explicit BudgetMeter(std::uint64_t limit) : limit_(limit) {}

  void charge(std::uint64_t n = 1);
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

/// Sharding of an index space into contiguous blocks. Concatenating shard
/// outputs in shard order reproduces the serial order.
struct Shard {
  unsigned index = 0;
  unsigned count = 1;

  std::uint64_t begin(std::uint64_t total) const { return split(total, index); }
  std::uint64_t end(std::uint64_t total) const { return split(total, index + 1); }

 private:
  std::uint64_t split(std::uint64_t total, unsigned i) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(total) * i / count);
  }
};

}  // namespace cgk
