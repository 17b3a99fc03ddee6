#pragma once

#include <array>
#include <cstdint>

namespace sepbeam {

// Counter-based pseudo-random primitives shared by the Monte-Carlo kernels
// and the channel generators.  Every draw is a pure function of
// (seed, stream, index), so results are reproducible regardless of thread
// count or evaluation order.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// One 64-bit Philox key per logical random stream.  Streams keep noise,
// channel, and initialisation draws statistically independent while staying
// reproducible from a single user-facing seed.
inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ (stream * 0x9E3779B97F4A7C15ULL));
}

// Philox4x32-10 block cipher, a counter-based generator.
// Verified against the reference known-answer vectors:
//   ctr=key=0        -> 6627e8d5 e169c58d bc57ac4c 9b00dbd8
//   ctr=key=0xff..ff -> 408f276d 41c83b0e a20bc7c6 6d5451fd
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint64_t kM0 = 0xD2511F53ULL;
  constexpr std::uint64_t kM1 = 0xCD9E8D57ULL;
  constexpr std::uint32_t kW0 = 0x9E3779B9U;
  constexpr std::uint32_t kW1 = 0xBB67AE85U;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = kM0 * ctr[0];
    const std::uint64_t p1 = kM1 * ctr[2];
    const std::array<std::uint32_t, 4> next = {
        static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
        static_cast<std::uint32_t>(p1),
        static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
        static_cast<std::uint32_t>(p0),
    };
    ctr = next;
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

// Counter layout used throughout: words 0-1 hold the item index (trial or
// pair), words 2-3 hold the call number within that item.
inline std::array<std::uint32_t, 4> philox4x32_10(std::uint64_t index, std::uint64_t call,
                                                  std::uint64_t key64) {
  return philox4x32_10(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       static_cast<std::uint32_t>(call), static_cast<std::uint32_t>(call >> 32)},
      {static_cast<std::uint32_t>(key64), static_cast<std::uint32_t>(key64 >> 32)});
}

}  // namespace sepbeam
