#include "pseudodiag/rng.hpp"

#include <sstream>

namespace pseudodiag {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::string RngKey::to_string() const {
  std::ostringstream os;
  os << seed << ':' << image << ':' << combo << ':' << variant << ':' << lane;
  return os.str();
}

CounterRng::CounterRng(const RngKey& key) {
  std::uint64_t h = splitmix64(key.seed + kGamma);
  h = splitmix64(h ^ (key.image + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ (key.combo + 0x8cb92ba72f3d8dd7ULL));
  h = splitmix64(h ^ (key.variant + 0x2545f4914f6cdd1dULL));
  h = splitmix64(h ^ (key.lane + 0xd6e8feb86659fd93ULL));
  base_ = h;
}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return splitmix64(base_ + counter_ * kGamma);
}

std::uint64_t CounterRng::uniform(std::uint64_t bound) {
  // Rejection sampling on the top of the range keeps the result unbiased.
  const std::uint64_t limit = max() - (max() % bound);
  std::uint64_t v = operator()();
  while (v >= limit) v = operator()();
  return v % bound;
}

double CounterRng::uniform_real() {
  return static_cast<double>(operator()() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_range(double lo, double hi) {
  return lo + (hi - lo) * uniform_real();
}

}  // namespace pseudodiag
