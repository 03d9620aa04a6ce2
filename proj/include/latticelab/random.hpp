#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace latticelab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent generator for (seed, stream, index). Results depend only on the
// triple, never on which worker draws them.
inline std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t index = 0) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ (stream * 0xd1b54a32d192ed03ULL));
  s = splitmix64(s ^ index);
  return std::mt19937_64(s);
}

// Uniform in [0, 1) from the top 53 bits; avoids the implementation-defined
// std::uniform_real_distribution so reports agree across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline double standard_normal(std::mt19937_64& rng) {
  // Box-Muller; u1 in (0, 1].
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Uniform direction on the Euclidean unit sphere.
inline std::vector<double> random_unit(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  double s = 0.0;
  do {
    s = 0.0;
    for (double& x : v) {
      x = standard_normal(rng);
      s += x * x;
    }
  } while (s == 0.0);
  const double inv = 1.0 / std::sqrt(s);
  for (double& x : v) x *= inv;
  return v;
}

}  // namespace latticelab
