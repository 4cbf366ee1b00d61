#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace climkt {

using Rng = std::mt19937_64;

// Independent sub-streams are addressed by a path below the master seed so
// that no component's draws depend on how many numbers another consumed.
enum class Stream : std::uint64_t {
  Truth = 1,
  Traders = 2,
  Network = 3,
  Market = 4,
  Posterior = 5,
  Revision = 6,
  Replicate = 7,
  Design = 8,
  Bootstrap = 9,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, Stream s, std::initializer_list<std::uint64_t> path = {}) {
  std::uint64_t h = derive_seed(master, {static_cast<std::uint64_t>(s)});
  return path.size() ? derive_seed(h, path) : h;
}

inline Rng make_stream(std::uint64_t master, Stream s, std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(master, s, path));
}

// Uniform on [0, 1). Written out rather than via std::uniform_real_distribution
// so that degenerate intervals a + (b - a) * u are well defined.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

// Uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

}  // namespace climkt
