#pragma once

#include <cstdint>

namespace vcontract {

/// xorshift64* (Vigna 2014): state ^= state >> 12; state ^= state << 25;
/// state ^= state >> 27; output = state * 0x2545F4914F6CDD1D.
///
/// The seed is passed through one splitmix64 step so that small seeds and
/// seed 0 give usable states. Any implementation following these two steps
/// reproduces every stream in this library bit-for-bit.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the independent stream number `index` under a master seed. Used
/// wherever work is split into blocks so results do not depend on threads.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace vcontract
