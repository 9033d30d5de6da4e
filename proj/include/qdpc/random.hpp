#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qdpc {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent stream seeds from a master
/// seed and a task key, so results never depend on which worker ran a task.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t s = mix_seed(master);
  for (auto k : keys) s = mix_seed(s ^ mix_seed(k));
  return s;
}

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> keys = {}) {
  return Rng(derive_seed(master, keys));
}

}  // namespace qdpc
