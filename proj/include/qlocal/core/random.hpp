#pragma once

#include <cstdint>
#include <random>

namespace qlocal {

// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for sub-stream `stream` of a run seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

// Well-known stream tags.
namespace streams {
inline constexpr std::uint64_t measurement = 0xffff'0000'0000'0001ULL;
inline constexpr std::uint64_t node_base = 0x0001'0000'0000'0000ULL;
inline constexpr std::uint64_t shot_base = 0x0002'0000'0000'0000ULL;
}  // namespace streams

// Seeded source used everywhere randomness is consumed. mt19937_64 has a
// portable output sequence; doubles are built from the top 53 bits so the
// stream is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bit() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qlocal
