#include <gtest/gtest.h>

#include <cmath>

#include "obdwf/channel.hpp"

namespace obdwf {
namespace {

PhyParams phy_with_beta(double beta) { return PhyParams::from_beta(beta); }

TEST(PhyParams, DerivedQuantities) {
  const PhyParams phy = phy_with_beta(110.0);
  EXPECT_NEAR(phy.beta(), 110.0, 1e-10);
  EXPECT_NEAR(phy.gamma(), std::sqrt(110.0), 1e-10);
  EXPECT_NEAR(phy.rate_bps, 1e6 * std::log2(110.0), 1e-6);
  EXPECT_NEAR(phy.bits_per_slot(), 5e3 * std::log2(110.0), 1e-9);
  EXPECT_DOUBLE_EQ(db_to_linear(20.0), 100.0);
}

TEST(PhyParams, ValidateRejects) {
  PhyParams phy = phy_with_beta(2.0);
  EXPECT_NO_THROW(validate(phy));
  phy.alpha = 2.0;
  EXPECT_THROW(validate(phy), std::invalid_argument);
  phy = phy_with_beta(2.0);
  phy.xi = 1.5;
  EXPECT_THROW(validate(phy), std::invalid_argument);
  phy = phy_with_beta(1.0);
  EXPECT_THROW(validate(phy), std::invalid_argument);
}

TEST(LinkRate, ReferenceValues) {
  const PhyParams phy = phy_with_beta(2.0);
  EXPECT_NEAR(link_rate(1.0, 1.0, phy), 6658211.482751795, 1e-6);
  EXPECT_NEAR(link_rate(1.0, 2.0, phy), 2857980.995127572, 1e-6);
  EXPECT_EQ(link_rate(0.0, 1.0, phy), 0.0);
  EXPECT_THROW(link_rate(1.0, 0.0, phy), std::domain_error);
  EXPECT_THROW(link_rate(-1.0, 1.0, phy), std::domain_error);
}

TEST(LinkRate, MonotoneInGainAndDistance) {
  const PhyParams phy = phy_with_beta(2.0);
  double prev = -1.0;
  for (double h = 0.0; h < 5.0; h += 0.25) {
    const double r = link_rate(h, 1.5, phy);
    EXPECT_GT(r, prev);
    prev = r;
  }
  prev = 1e300;
  for (double d = 0.1; d < 6.0; d += 0.3) {
    const double r = link_rate(1.0, d, phy);
    EXPECT_LT(r, prev);
    prev = r;
  }
}

TEST(Connected, BoundaryCountsAsConnected) {
  PhyParams phy = phy_with_beta(2.0);
  phy.rate_bps = link_rate(1.0, 1.0, phy);
  EXPECT_TRUE(is_connected(1.0, 1.0, phy));
  EXPECT_FALSE(is_connected(0.0, 1.0, phy));
  PhyParams strong = phy_with_beta(1000.0);
  strong.power = 1e30;
  EXPECT_TRUE(is_connected(1e-6, 4.0, strong));
}

TEST(Connected, EquivalentToCoverageRadius) {
  const PhyParams phy = phy_with_beta(110.0);
  CounterRng rng(5, Stream::kUser);
  for (int i = 0; i < 20000; ++i) {
    const double h = draw_fading(RayleighFading{}, rng);
    const double d = 0.01 + 5.0 * uniform01(rng);
    const double cov = coverage_radius(h, phy);
    if (std::abs(d - cov) <= 1e-9 * cov) continue;
    ASSERT_EQ(is_connected(h, d, phy), d <= cov) << "h=" << h << " d=" << d;
  }
}

TEST(AfMetric, Examples) {
  EXPECT_EQ(af_effective_snr(0.0, 0.5, 100.0), 0.0);
  EXPECT_NEAR(af_effective_snr(0.01, 0.01, 100.0), 1.0 / 3.0, 1e-15);
  const double big = 1e9;
  EXPECT_NEAR(af_effective_snr(big, big, 100.0) / (100.0 * big), 0.5, 1e-9);
}

TEST(AfMetric, BelowWeakerHop) {
  CounterRng rng(6, Stream::kUser);
  for (int i = 0; i < 10000; ++i) {
    const double a = 10.0 * uniform01(rng);
    const double b = 10.0 * uniform01(rng);
    EXPECT_LE(af_effective_snr(a, b, 100.0), 100.0 * std::min(a, b));
  }
}

TEST(Fading, RayleighMoments) {
  CounterRng rng(7, Stream::kUser);
  const int n = 1'000'000;
  double sum = 0.0;
  int above = 0;
  for (int i = 0; i < n; ++i) {
    const double h = draw_fading(RayleighFading{}, rng);
    sum += h;
    above += h > 1.0;
  }
  EXPECT_NEAR(sum / n, 1.0, 3.0 / std::sqrt(n));
  const double p = std::exp(-1.0);
  EXPECT_NEAR(above / double(n), p, 3 * std::sqrt(p * (1 - p) / n));
}

TEST(Fading, TabulatedDegenerate) {
  CounterRng rng(8, Stream::kUser);
  const FadingModel table = TabulatedFading{{1.0}, {1.0}};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(draw_fading(table, rng), 1.0);
}

TEST(Fading, TableValidation) {
  EXPECT_NO_THROW(validate(FadingModel{TabulatedFading{{0.5, 1.5}, {0.5, 0.5}}}));
  EXPECT_THROW(validate(FadingModel{TabulatedFading{{1.0, 2.0}, {0.5, 0.5}}}), std::invalid_argument);
  EXPECT_THROW(validate(FadingModel{TabulatedFading{{1.0}, {0.9}}}), std::invalid_argument);
  EXPECT_THROW(validate(FadingModel{TabulatedFading{{}, {}}}), std::invalid_argument);
}

TEST(ConnectionProbability, NearOneWhenCoverageExceedsDisk) {
  PhyParams phy = phy_with_beta(1.0 + 1e-6);
  phy.power = 1e12;
  const auto est = connection_probability_mc(phy, RayleighFading{}, DiskGeometry(2.5, 5),
                                             Endpoint::kSource, 20000, 1);
  EXPECT_GT(est.value, 0.999);
}

TEST(ConnectionProbability, Deterministic) {
  const PhyParams phy = phy_with_beta(110.0);
  const DiskGeometry g(2.5, 5);
  const auto a = connection_probability_mc(phy, RayleighFading{}, g, Endpoint::kSource, 50000, 9);
  const auto b = connection_probability_mc(phy, RayleighFading{}, g, Endpoint::kSource, 50000, 9);
  EXPECT_EQ(a.value, b.value);
  EXPECT_LE(a.ci_low, a.value);
  EXPECT_GE(a.ci_high, a.value);
}

TEST(ConnectionProbability, EndpointsAgreeBySymmetry) {
  const PhyParams phy = phy_with_beta(110.0);
  const DiskGeometry g(2.5, 5);
  const auto s = connection_probability_mc(phy, RayleighFading{}, g, Endpoint::kSource, 400000, 2);
  const auto d = connection_probability_mc(phy, RayleighFading{}, g, Endpoint::kDestination, 400000, 3);
  EXPECT_NEAR(s.value, d.value, 2 * (s.ci_high - s.ci_low));
}

TEST(ConnectionProbability, IntervalShrinksAsRootN) {
  const PhyParams phy = phy_with_beta(110.0);
  const DiskGeometry g(2.5, 5);
  const auto width = [&](std::uint64_t n) {
    const auto e = connection_probability_mc(phy, RayleighFading{}, g, Endpoint::kSource, n, 4);
    return e.ci_high - e.ci_low;
  };
  const double w1 = width(100000);
  const double w2 = width(200000);
  const double w4 = width(400000);
  EXPECT_NEAR(w1 / w2, std::sqrt(2.0), 0.2 * std::sqrt(2.0));
  EXPECT_NEAR(w1 / w4, 2.0, 0.2 * 2.0);
}

TEST(ConnectionProbability, SlopeIsMinusOneOverADecade) {
  const DiskGeometry g(2.5, 5);
  double prev = 1.0;
  std::vector<double> values;
  const double g0 = std::sqrt(110.0);
  for (double gamma : {g0, 10 * g0}) {
    const auto e = connection_probability_mc(phy_with_beta(gamma * gamma), RayleighFading{}, g,
                                             Endpoint::kSource, 400000, 5);
    EXPECT_LT(e.value, prev);
    prev = e.value;
    values.push_back(e.value);
  }
  EXPECT_NEAR(std::log10(values[1] / values[0]), -1.0, 0.1);
}

}  // namespace
}  // namespace obdwf
