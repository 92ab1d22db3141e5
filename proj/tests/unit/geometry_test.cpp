#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "obdwf/geometry.hpp"

namespace obdwf {
namespace {

TEST(RegionBoundaries, SingleRegionIsWholeDiameter) {
  EXPECT_EQ(compute_region_boundaries(2.5, 1), (std::vector<double>{0.0, 5.0}));
}

TEST(RegionBoundaries, TwoRegionsSplitAtCenter) {
  EXPECT_EQ(compute_region_boundaries(2.5, 2), (std::vector<double>{0.0, 2.5, 5.0}));
}

TEST(RegionBoundaries, FiveRegionsMatchReference) {
  const std::vector<double> expected = {0.0, 1.27034541809073, 2.10565951549996,
                                        2.89434048450004, 3.72965458190927, 5.0};
  const auto edges = compute_region_boundaries(2.5, 5);
  ASSERT_EQ(edges.size(), expected.size());
  for (std::size_t i = 0; i < edges.size(); ++i) EXPECT_NEAR(edges[i], expected[i], 1e-11);
}

TEST(RegionBoundaries, StripsHaveEqualArea) {
  for (int m : {1, 2, 3, 5, 8, 13}) {
    const DiskGeometry g(2.5, m);
    const auto& e = g.boundaries();
    for (int i = 0; i < m; ++i) {
      const double strip = g.segment_area(e[i + 1]) - g.segment_area(e[i]);
      EXPECT_NEAR(strip, g.area() / m, 1e-9 * g.area() / m) << "m=" << m << " i=" << i;
      EXPECT_LT(e[i], e[i + 1]);
    }
    EXPECT_EQ(e.front(), g.source().x);
    EXPECT_EQ(e.back(), g.destination().x);
  }
}

TEST(RegionBoundaries, RejectsBadInput) {
  EXPECT_THROW(compute_region_boundaries(0.0, 5), std::invalid_argument);
  EXPECT_THROW(compute_region_boundaries(2.5, 0), std::invalid_argument);
}

TEST(Geometry, EndpointsAreAntipodal) {
  const DiskGeometry g(2.5, 5);
  EXPECT_DOUBLE_EQ(distance(g.source(), g.destination()), 5.0);
  EXPECT_DOUBLE_EQ(distance(g.source(), g.center()), 2.5);
}

TEST(RegionOf, Examples) {
  const DiskGeometry g5(2.5, 5);
  EXPECT_EQ(region_of(g5, {0.1, 0.0}), 1);
  EXPECT_EQ(region_of(g5, {4.9, 0.0}), 5);
  const DiskGeometry g2(2.5, 2);
  EXPECT_EQ(region_of(g2, {2.5, 1.0}), 2);
  EXPECT_EQ(region_of(g5, {g5.boundaries()[2], 0.0}), 3);
  EXPECT_THROW(region_of(g5, {2.5, 2.6}), std::domain_error);
}

TEST(SampleDisk, RegionsEquallyLikelyAndCentered) {
  const DiskGeometry g(2.5, 5);
  CounterRng rng(11, Stream::kUser);
  const int n = 100000;
  std::vector<int> counts(6, 0);
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto p = sample_uniform_disk(g, rng);
    ASSERT_LE(distance(p.point, g.center()), 2.5 + 1e-12);
    ASSERT_EQ(p.region, region_of(g, p.point));
    ++counts[p.region];
    sx += p.point.x;
    sy += p.point.y;
  }
  const double sigma = std::sqrt(0.2 * 0.8 / n);
  for (int r = 1; r <= 5; ++r) EXPECT_NEAR(counts[r] / double(n), 0.2, 3 * sigma);
  // Var of x or y for a uniform disk is r^2 / 4.
  const double s_mean = 1.25 / std::sqrt(n);
  EXPECT_NEAR(sx / n, 2.5, 3 * s_mean);
  EXPECT_NEAR(sy / n, 0.0, 3 * s_mean);
}

TEST(SampleRegion, StaysInsideStrip) {
  const DiskGeometry g(2.5, 5);
  CounterRng rng(12, Stream::kUser);
  const auto& e = g.boundaries();
  for (int i = 0; i < 20000; ++i) {
    const auto p = sample_uniform_in_region(g, 3, rng);
    ASSERT_GE(p.point.x, e[2]);
    ASSERT_LT(p.point.x, e[3]);
    ASSERT_TRUE(g.contains(p.point));
  }
  EXPECT_THROW(sample_uniform_in_region(g, 6, rng), std::out_of_range);
}

TEST(SampleRegion, HalfDiskMatchesAnalyticDistribution) {
  const DiskGeometry g(2.5, 2);
  CounterRng rng(13, Stream::kUser);
  const int n = 10000;
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(sample_uniform_in_region(g, 1, rng).point.x);
  std::sort(xs.begin(), xs.end());
  const double half = g.area() / 2.0;
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = g.segment_area(xs[i]) / half;
    ks = std::max({ks, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
  }
  EXPECT_LT(ks, 1.358 / std::sqrt(n));
}

TEST(SampleRegion, SingleRegionEqualsDiskDistribution) {
  const DiskGeometry g(2.5, 1);
  CounterRng rng(14, Stream::kUser);
  const int n = 50000;
  double r2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto p = sample_uniform_in_region(g, 1, rng);
    const double d = distance(p.point, g.center());
    r2 += d * d;
  }
  // E|p - c|^2 = r^2 / 2 for a uniform disk.
  EXPECT_NEAR(r2 / n, 3.125, 0.03);
}

double walk_probability(int from, double q, int m, int to) {
  CounterRng rng(21, Stream::kUser);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const int next = step_random_walk(from, q, m, rng);
    EXPECT_GE(next, 1);
    EXPECT_LE(next, m);
    hits += next == to;
  }
  return hits / double(n);
}

TEST(RandomWalk, InteriorTransitionProbabilities) {
  const double tol = 3 * std::sqrt(0.24 / 200000);
  EXPECT_NEAR(walk_probability(3, 0.2, 5, 2), 0.2, tol);
  EXPECT_NEAR(walk_probability(3, 0.2, 5, 3), 0.6, tol);
  EXPECT_NEAR(walk_probability(3, 0.2, 5, 4), 0.2, tol);
}

TEST(RandomWalk, EdgeTransitionProbabilities) {
  const double tol = 3 * std::sqrt(0.25 / 200000);
  EXPECT_NEAR(walk_probability(1, 0.2, 5, 1), 0.8, tol);
  EXPECT_NEAR(walk_probability(1, 0.2, 5, 2), 0.2, tol);
  EXPECT_NEAR(walk_probability(1, 0.5, 2, 2), 0.5, tol);
  EXPECT_NEAR(walk_probability(5, 0.2, 5, 4), 0.2, tol);
}

TEST(RandomWalk, StationaryDistributionIsUniform) {
  for (double q : {0.1, 0.3, 0.5}) {
    CounterRng rng(22, Stream::kUser);
    std::vector<int> counts(6, 0);
    int region = 1;
    const int n = 1'000'000;
    for (int t = 0; t < n; ++t) {
      region = step_random_walk(region, q, 5, rng);
      ++counts[region];
    }
    for (int r = 1; r <= 5; ++r) EXPECT_NEAR(counts[r] / double(n), 0.2, 0.01) << "q=" << q;
  }
}

TEST(Mobility, ValidateRejectsBadParameters) {
  EXPECT_THROW(validate(MobilityModel{RandomWalk{0.0}}), std::invalid_argument);
  EXPECT_THROW(validate(MobilityModel{RandomWalk{0.6}}), std::invalid_argument);
  EXPECT_NO_THROW(validate(MobilityModel{RandomWalk{0.5}}));
  EXPECT_THROW(validate(MobilityModel{RandomWaypoint{0.7, 0.6, {}}}), std::invalid_argument);
  EXPECT_THROW(validate(MobilityModel{RandomWaypoint{-0.1, 0.6, {}}}), std::invalid_argument);
}

TEST(Waypoint, StraightLineAdvance) {
  const DiskGeometry g(2.5, 5);
  CounterRng rng(31, Stream::kUser);
  const WaypointState s{{1.0, 0.0}, {4.0, 0.0}, 0.5, 0};
  const auto next = step_waypoint(s, g, RandomWaypoint{0.1, 0.6, {0}}, rng);
  EXPECT_NEAR(next.point.x, 1.5, 1e-15);
  EXPECT_EQ(next.point.y, 0.0);
  EXPECT_EQ(next.target, s.target);
}

TEST(Waypoint, PauseMeanIsFive) {
  const DiskGeometry g(2.5, 5);
  const RandomWaypoint model{0.1, 0.6, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
  CounterRng rng(32, Stream::kUser);
  WaypointState s = initial_waypoint(g, model, rng);
  int arrivals = 0;
  double pause_sum = 0.0;
  while (arrivals < 10000) {
    const auto next = step_waypoint(s, g, model, rng);
    if (s.pause == 0 && next.point == s.target && next.point != s.point) {
      pause_sum += next.pause;
      ++arrivals;
    }
    s = next;
  }
  // Uniform on {0..10}: mean 5, variance 10.
  EXPECT_NEAR(pause_sum / arrivals, 5.0, 3 * std::sqrt(10.0 / arrivals));
}

TEST(Waypoint, NeverLeavesDisk) {
  const DiskGeometry g(2.5, 5);
  const RandomWaypoint model{0.1, 0.6, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
  CounterRng rng(33, Stream::kUser);
  WaypointState s = initial_waypoint(g, model, rng);
  int outside = 0;
  for (int t = 0; t < 1'000'000; ++t) {
    s = step_waypoint(s, g, model, rng);
    outside += !g.contains(s.point);
  }
  EXPECT_EQ(outside, 0);
}

}  // namespace
}  // namespace obdwf
