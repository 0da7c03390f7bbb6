#pragma once

#include <cstdint>
#include <random>

namespace cascademix {

// splitmix64: cheap, well-mixed 64-bit hash used to derive independent
// substream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the k-th substream of a master seed. Substreams are used for
// per-cascade simulation so batches are reproducible under any scheduling.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t k) {
  return splitmix64(master ^ splitmix64(k + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Uniform draw on the open interval (0, 1); inverse-transform samplers
// need u > 0 so -log(u) stays finite.
inline double uniform_open01(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(rng);
  while (u <= 0.0) u = dist(rng);
  return u;
}

}  // namespace cascademix
