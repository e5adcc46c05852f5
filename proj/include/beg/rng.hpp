#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace beg {

// splitmix64 finalizer; used only to derive child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child seed for replica `a`, attempt `b` of a run seeded with `base`.
// Independent of scheduling, so results do not depend on the worker count.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(mix64(base) ^ a) + b);
}

// Seeded stream. Every draw is defined bit-for-bit by the standard
// mt19937_64 output sequence, independent of the C++ library in use.
class Stream {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64;seed=splitmix64-derive;u=53bit";

  explicit Stream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [0, n), n >= 1; unbiased by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace beg
