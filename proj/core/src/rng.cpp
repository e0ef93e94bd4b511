#include "popsim/rng.hpp"

namespace popsim {

void Rng::reseed(std::uint64_t seed) noexcept {
  seed_ = seed;
  std::uint64_t x = seed;
  for (auto& word : state_) {
    word = mix64(x);
    x += 0x9E3779B97F4A7C15ULL;
  }
  // xoshiro must not start from the all-zero state; splitmix64 never yields
  // four zero words in a row, so no fixup is needed here.
}

}  // namespace popsim
