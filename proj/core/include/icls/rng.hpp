#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace icls {

using Rng = std::mt19937_64;

// Stateless 64-bit mixer (splitmix64 finalizer). Used to derive independent
// substreams from a master seed plus a tag path, so every frame, link and
// noise source gets its own generator regardless of execution order.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = mix64(master);
  for (std::uint64_t t : tags) s = mix64(s ^ mix64(t));
  return s;
}

inline Rng derive_rng(std::uint64_t master,
                      std::initializer_list<std::uint64_t> tags) {
  return Rng(derive_seed(master, tags));
}

}  // namespace icls
