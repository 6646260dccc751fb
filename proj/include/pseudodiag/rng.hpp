#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace pseudodiag {

// Identifies one independent random stream. Streams are derived from the
// run seed plus the position of the item being generated, so results do not
// depend on the order in which items are processed.
struct RngKey {
  std::uint64_t seed = 0;
  std::uint64_t image = 0;
  std::uint64_t combo = 0;
  std::uint64_t variant = 0;
  std::uint64_t lane = 0;

  RngKey with_lane(std::uint64_t l) const {
    RngKey k = *this;
    k.lane = l;
    return k;
  }

  std::string to_string() const;

  auto operator<=>(const RngKey&) const = default;
};

// Lane layout used by the hard-sample generators: purpose in the top byte,
// sample index in the middle, attempt number in the low 16 bits.
constexpr std::uint64_t make_lane(std::uint64_t purpose, std::uint64_t index,
                                  std::uint64_t attempt) {
  return (purpose << 56) | ((index & 0xffffffffffULL) << 16) |
         (attempt & 0xffffULL);
}

// Counter-based generator: output n is splitmix64(base + n * gamma) where base
// is a hash of the key. Satisfies UniformRandomBitGenerator. The bounded
// helpers below are used instead of <random> distributions so sequences are
// identical across standard library implementations.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(const RngKey& key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);
  // Uniform double in [0, 1) with 53 random bits.
  double uniform_real();
  // Uniform double in [lo, hi].
  double uniform_range(double lo, double hi);
  bool coin() { return (operator()() >> 63) != 0; }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pseudodiag
