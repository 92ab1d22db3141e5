#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "obdwf/rng.hpp"

namespace obdwf {
namespace {

TEST(Philox, KnownAnswerZeroCounterZeroKey) {
  const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out = philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              {0xffffffff, 0xffffffff});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                              {0xa4093822, 0x299f31d0});
  EXPECT_EQ(out[0], 0xd16cfe09u);
  EXPECT_EQ(out[1], 0x94fdccebu);
  EXPECT_EQ(out[2], 0x5001e420u);
  EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(CounterRng, SameCoordinatesGiveSameSequence) {
  CounterRng a(42, Stream::kFading, 1234, 7);
  CounterRng b(42, Stream::kFading, 1234, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(CounterRng, DistinctCoordinatesDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed : {1u, 2u}) {
    for (Stream s : {Stream::kMobility, Stream::kFading}) {
      for (std::uint64_t frame : {0u, 1u, 1u << 20}) {
        for (std::uint32_t idx : {0u, 1u}) {
          CounterRng r(seed, s, frame, idx);
          firsts.insert(r());
        }
      }
    }
  }
  EXPECT_EQ(firsts.size(), 24u);
}

TEST(CounterRng, HighFrameBitsReachCounter) {
  CounterRng a(1, Stream::kFading, 1ull << 32);
  CounterRng b(1, Stream::kFading, 0);
  EXPECT_NE(a(), b());
}

TEST(Uniform, RangesHold) {
  CounterRng rng(3, Stream::kUser);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = uniform01_open_low(rng);
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_LT(uniform_below(rng, 7), 7u);
  }
}

TEST(Uniform, MeanIsOneHalf) {
  CounterRng rng(5, Stream::kUser);
  const int n = 1'000'000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += uniform01(rng);
  const double sigma = std::sqrt(1.0 / 12.0 / n);
  EXPECT_NEAR(sum / n, 0.5, 3 * sigma);
}

}  // namespace
}  // namespace obdwf
