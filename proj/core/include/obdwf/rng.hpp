#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace obdwf {

// Independent random streams. Every draw in a simulation is addressed by
// (seed, stream, frame, index), so the order in which draws are requested
// never changes their values.
enum class Stream : std::uint16_t {
  kInit = 1,
  kMobility = 2,
  kFading = 3,
  kArrivals = 4,
  kContention = 5,
  kSampling = 6,
  kOracle = 7,
  kUser = 8,
};

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based generator. Satisfies std::uniform_random_bit_generator.
///
/// The 128-bit Philox counter is laid out as
///   word0 = sub-counter (advanced by successive calls)
///   word1 = index (relay / link / user)
///   word2 = low 32 bits of frame
///   word3 = stream tag | high 16 bits of frame
/// and the key is the 64-bit seed.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t frame = 0,
             std::uint32_t index = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

 private:
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(CounterRng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1].
inline double uniform01_open_low(CounterRng& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Multiply-shift; bias below n / 2^64.
inline std::uint64_t uniform_below(CounterRng& rng, std::uint64_t n) {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(rng()) * n) >> 64);
}

}  // namespace obdwf
