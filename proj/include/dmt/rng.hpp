#pragma once

#include <cstddef>
#include <cstdint>

namespace dmt {

/// PCG32 (O'Neill): 64-bit state, 32-bit output, selectable stream.
/// All randomness in this project flows through this generator so that a
/// single top-level seed reproduces every number, on every platform.
struct Pcg32 {
  using result_type = std::uint32_t;

  std::uint64_t state = 0x853c49e6748fea9bULL;
  std::uint64_t inc = 0xda3e39cb94b95bdbULL;  // stream selector, always odd

  Pcg32() = default;

  Pcg32(std::uint64_t seed, std::uint64_t stream) {
    inc = (stream << 1u) | 1u;
    state = 0;
    (*this)();
    state += seed;
    (*this)();
  }

  std::uint32_t operator()() {
    const std::uint64_t old = state;
    state = old * 6364136223846793005ULL + inc;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  static constexpr std::uint32_t min() { return 0u; }
  static constexpr std::uint32_t max() { return 0xFFFFFFFFu; }
};

/// SplitMix64 finalizer. Used to spread seeds and stream ids.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent generator for (seed, stream). Documented rule:
/// state is seeded with mix64(seed ^ mix64(stream)), the PCG increment is
/// the stream id itself. Same pair always yields the same sequence.
inline Pcg32 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Pcg32(mix64(seed ^ mix64(stream)), stream);
}

/// Uniform deviate in (0, 1]: (r + 1) / 2^32.
inline double uniform_open_closed(Pcg32& rng) {
  constexpr double inv = 1.0 / 4294967296.0;
  return (static_cast<double>(rng()) + 1.0) * inv;
}

/// Uniform deviate in [0, 1): r / 2^32.
inline double uniform_closed_open(Pcg32& rng) {
  constexpr double inv = 1.0 / 4294967296.0;
  return static_cast<double>(rng()) * inv;
}

/// Uniform integer in [0, n). Fast fixed-point range reduction; the tiny
/// modulo bias is irrelevant at our sizes and keeps the draw count at one.
inline std::size_t uniform_below(Pcg32& rng, std::size_t n) {
  return static_cast<std::size_t>((static_cast<std::uint64_t>(rng()) * n) >> 32);
}

}  // namespace dmt
