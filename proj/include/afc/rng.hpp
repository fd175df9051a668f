#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace afc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable derivation of independent stream seeds from one master seed.
// Streams are tagged by name ("policy", "sim", ...) plus an index.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t state = master ^ h;
  std::uint64_t s0 = splitmix64(state);
  state ^= index * 0x9e3779b97f4a7c15ULL;
  std::uint64_t s1 = splitmix64(state);
  return s0 ^ (s1 + 0x9e3779b97f4a7c15ULL + (s0 << 6) + (s0 >> 2));
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::string_view tag,
                                std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(master, tag, index));
}

}  // namespace afc
