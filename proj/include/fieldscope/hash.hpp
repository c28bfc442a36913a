#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fieldscope {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

// FNV-1a over bytes. Used for linkage keys, split ordering, and file digests;
// stable across platforms and runs.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::uint64_t value, std::uint64_t h = kFnvOffset) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

// Seeded id hash: mixes the seed before the payload so distinct seeds give
// unrelated orderings of the same id set.
inline std::uint64_t seeded_hash(std::uint64_t seed, std::string_view payload) {
  return fnv1a64(payload, fnv1a64(seed));
}

std::string hex64(std::uint64_t v);

// Digest of a file's contents; throws InputError when unreadable.
std::uint64_t file_digest(const std::string& path);

}  // namespace fieldscope
