#pragma once
#include <cstdint>
#include <random>
#include <string_view>

namespace memsnn {

// Labeled stream splitting: every randomized component derives its own
// generator from (top-level seed, label). Adding a new consumer never
// shifts the draws of existing ones.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t hash_label(uint64_t seed, std::string_view label) {
  uint64_t h = 0xcbf29ce484222325ull ^ splitmix64(seed);
  for (char c : label) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ull;  // FNV-1a
  }
  return splitmix64(h);
}

inline std::mt19937_64 derive_stream(uint64_t seed, std::string_view label) {
  return std::mt19937_64(hash_label(seed, label));
}

}  // namespace memsnn
