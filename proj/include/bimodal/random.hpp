#ifndef BIMODAL_RANDOM_HPP
#define BIMODAL_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bimodal {

/// Seed state for every sampler in the library. One engine per thread; never
/// share an engine across threads.
using Rng = std::mt19937_64;

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based seed derivation: folds the master seed and an index path
/// (experiment id, replication index, ...) through mix64. The result depends
/// only on its arguments, so parallel replications are reproducible no
/// matter which worker runs them or in what order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t v : path) h = mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(master, path));
}

}  // namespace bimodal

#endif  // BIMODAL_RANDOM_HPP
