#pragma once

// Deterministic chunked RNG: each chunk of work owns a stream derived from
// (master seed, chunk index), so worker count never changes results.

#include <cstdint>
#include <random>

namespace ldw {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  static Rng for_chunk(std::uint64_t master_seed, std::uint64_t chunk_index) {
    std::uint64_t s = master_seed ^ (0xd1342543de82ef95ull * (chunk_index + 1));
    std::uint64_t mixed = splitmix64(s);
    mixed ^= splitmix64(s);
    return Rng(mixed);
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, n).
  std::uint32_t uniform_below(std::uint32_t n) {
    std::uint64_t x = eng_();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    return static_cast<std::uint32_t>(m >> 64);
  }

  double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ldw
