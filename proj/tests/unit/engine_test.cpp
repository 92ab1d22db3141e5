#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "obdwf/engine.hpp"

namespace obdwf {
namespace {

SimConfig small(int k = 20, std::int64_t horizon = 20000) {
  SimConfig c;
  c.relays = k;
  apply_rate_rule(c);
  c.horizon = horizon;
  return c;
}

SimConfig single_relay() {
  SimConfig c;
  c.relays = 1;
  c.gamma_exponent.reset();
  c.phy = PhyParams::from_beta(1.1);
  c.fading = TabulatedFading{{1.0}, {1.0}};
  c.direct_link = false;
  c.horizon = 10000;
  c.warmup = 1000;
  return c;
}

TEST(Stability, FlatTrajectoryIsStable) {
  std::vector<double> flat(1000, 4.0);
  const auto v = assess_stability(flat, 100);
  EXPECT_TRUE(v.stable);
  EXPECT_DOUBLE_EQ(v.slope, 0.0);
  EXPECT_DOUBLE_EQ(v.tail_mean, 4.0);
}

TEST(Stability, LinearGrowthIsUnstable) {
  std::vector<double> ramp(1000);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.01 * i;
  const auto v = assess_stability(ramp, 100);
  EXPECT_FALSE(v.stable);
  EXPECT_NEAR(v.slope, 0.01, 1e-12);
}

TEST(Stability, LateSurgeFailsTailTest) {
  std::vector<double> traj(1000, 1.0);
  for (std::size_t i = 950; i < 1000; ++i) traj[i] = 200.0;
  std::vector<double> reversed(traj.rbegin(), traj.rend());
  StabilityThresholds loose{1e9, 3.0};
  EXPECT_FALSE(assess_stability(traj, 100, loose).stable);
  EXPECT_TRUE(assess_stability(reversed, 0, StabilityThresholds{1e9, 3.0}).stable);
}

TEST(Stability, EmptyQueueIsStable) {
  std::vector<std::uint32_t> zeros(500, 0);
  EXPECT_TRUE(assess_stability(zeros, 50).stable);
}

TEST(Stability, NeedsTwoSamplesAfterWarmup) {
  std::vector<double> t(10, 1.0);
  EXPECT_THROW(assess_stability(t, 9), std::invalid_argument);
}

TEST(Run, DeterministicInSeed) {
  SimConfig c = small();
  c.arrivals = ArrivalDistribution::bernoulli(0.1);
  c.seed = 9;
  EXPECT_EQ(run(c), run(c));
  SimConfig d = c;
  d.seed = 10;
  EXPECT_NE(run(c).delivered, run(d).delivered);
}

TEST(Run, NoArrivalsNothingHappens) {
  SimConfig c = small();
  const RunMetrics m = run(c);
  EXPECT_EQ(m.arrivals, 0u);
  EXPECT_EQ(m.delivered, 0u);
  EXPECT_EQ(m.throughput_bps, 0.0);
  EXPECT_DOUBLE_EQ(m.idle_fraction, 1.0);
  EXPECT_TRUE(m.stable());
}

TEST(Run, SingleRelayAlternatesExactly) {
  SimConfig c = single_relay();
  c.infinite_backlog = true;
  const RunMetrics m = run(c);
  EXPECT_EQ(m.delivered * 2, static_cast<std::uint64_t>(m.frames));
  EXPECT_NEAR(m.throughput_bps, c.phy.rate_bps / 2.0, 1e-9 * c.phy.rate_bps);
  EXPECT_DOUBLE_EQ(m.broadcast_fraction, 0.5);
  EXPECT_DOUBLE_EQ(m.forward_fraction, 0.5);
}

TEST(Run, InvariantsHoldForEveryProtocol) {
  for (const char* p : {"obdwf", "ddf", "af", "afsc:5", "dfsc:5"}) {
    SimConfig c = small(30, 15000);
    c.protocol = parse_protocol_spec(p);
    c.arrivals = ArrivalDistribution({{0, 0.95}, {3, 0.05}});
    c.conservation_interval = 500;
    const RunMetrics m = run(c);
    EXPECT_GT(m.conservation_checks, 0u) << p;
    EXPECT_EQ(m.conservation_violations, 0u) << p;
    EXPECT_EQ(m.lindley_violations, 0u) << p;
    EXPECT_EQ(m.stale_copy_violations, 0u) << p;
  }
}

TEST(Run, BufferLimitsRelayQueues) {
  SimConfig c = small(10, 10000);
  c.arrivals = ArrivalDistribution::bernoulli(0.9);
  c.buffer_capacity = 3;
  const RunMetrics m = run(c);
  EXPECT_LE(m.max_relay_queue, 3u);
  EXPECT_GT(m.source_drops, 0u);
}

TEST(Run, WaypointMobilityRuns) {
  SimConfig c = small(20, 5000);
  c.mobility = RandomWaypoint{0.1, 0.6, {0, 5, 10}};
  c.arrivals = ArrivalDistribution::bernoulli(0.05);
  const RunMetrics m = run(c);
  EXPECT_GT(m.delivered, 0u);
  EXPECT_EQ(m.conservation_violations, 0u);
}

TEST(Run, DdfServiceMatchesThroughput) {
  SimConfig c = small(30, 40000);
  c.protocol = {ProtocolKind::kDdf, 1};
  c.infinite_backlog = true;
  const RunMetrics m = run(c);
  ASSERT_GT(m.service_count, 100u);
  EXPECT_EQ(m.service_rho_total + m.service_eta_total, m.service_frames_total);
  EXPECT_NEAR(m.throughput_bps * m.mean_service / c.phy.rate_bps, 1.0, 0.05);
}

TEST(Run, StableRunHalvesAgree) {
  SimConfig c = small(20, 60000);
  c.arrivals = ArrivalDistribution::bernoulli(0.2);
  const RunMetrics m = run(c);
  ASSERT_TRUE(m.stable());
  EXPECT_NEAR(m.first_half_throughput_bps / m.second_half_throughput_bps, 1.0, 0.05);
  EXPECT_NEAR(m.throughput_bps / (0.2 * c.phy.bits_per_slot() / c.phy.slot_s), 1.0, 0.05);
}

TEST(Run, DelayCountsFramesFromArrivalToReception) {
  SimConfig c = single_relay();
  c.arrivals = ArrivalDistribution::bernoulli(0.01);
  const RunMetrics m = run(c);
  ASSERT_GT(m.delivered, 0u);
  EXPECT_GE(m.delay_mean_frames, 1.0);
  EXPECT_LT(m.delay_mean_frames, 1.05);
  EXPECT_EQ(m.delay_p50_frames, 1.0);
  EXPECT_LE(m.delay_p50_frames, m.delay_p95_frames);
  EXPECT_LE(m.delay_p95_frames, m.delay_p99_frames);
}

TEST(Validate, RejectsBadConfigs) {
  SimConfig c = small();
  c.relays = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c = small();
  c.horizon = 100;
  c.warmup = 100;
  EXPECT_THROW(validate(c), ConfigError);
  c = small();
  c.regions = 0;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Validate, WarnsOnShortWindow) {
  SimConfig c = small(20, 1000);
  const auto warnings = validate(c);
  EXPECT_FALSE(warnings.empty());
  c.horizon = 300000;
  EXPECT_TRUE(validate(c).empty());
}

TEST(RateRule, SquareRootOfK) {
  SimConfig c;
  c.relays = 256;
  apply_rate_rule(c);
  EXPECT_NEAR(c.phy.gamma(), 16.0, 1e-9);
  EXPECT_NEAR(c.phy.rate_bps, 8e6, 1e-3);
}

TEST(Replicate, SingleRunHasNoInterval) {
  const auto r = replicate(small(10, 3000), 1);
  EXPECT_EQ(r.runs.size(), 1u);
  EXPECT_TRUE(std::isnan(r.metric("throughput_bps").ci_low));
}

TEST(Replicate, ThreadCountDoesNotMatter) {
  SimConfig c = small(10, 4000);
  c.arrivals = ArrivalDistribution::bernoulli(0.2);
  const auto a = replicate(c, 4, 1);
  const auto b = replicate(c, 4, 3);
  ASSERT_EQ(a.runs.size(), b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) EXPECT_EQ(a.runs[i], b.runs[i]);
}

TEST(Aggregate, IdenticalValuesHaveZeroWidth) {
  const std::vector<double> v(5, 2.5);
  const auto a = aggregate(v);
  EXPECT_DOUBLE_EQ(a.mean, 2.5);
  EXPECT_DOUBLE_EQ(a.ci_low, 2.5);
  EXPECT_DOUBLE_EQ(a.ci_high, 2.5);
}

TEST(Aggregate, NormalInterval) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto a = aggregate(v);
  const double half = 1.96 * std::sqrt(5.0 / 3.0) / 2.0;
  EXPECT_NEAR(a.ci_high - a.mean, half, 1e-12);
  EXPECT_NEAR(a.mean - a.ci_low, half, 1e-12);
}

TEST(Replicate, IntervalShrinksAsRootN) {
  SimConfig c = small(10, 1500);
  c.protocol = {ProtocolKind::kDdf, 1};
  c.infinite_backlog = true;
  const auto width = [&](int n) {
    const auto a = replicate(c, n).metric("throughput_bps");
    return a.ci_high - a.ci_low;
  };
  const double w8 = width(8);
  const double w32 = width(32);
  const double w128 = width(128);
  EXPECT_NEAR(w8 / w32, 2.0, 0.6);
  EXPECT_NEAR(w32 / w128, 2.0, 0.6);
}

TEST(Sweep, EmptyValuesGiveNoRows) {
  EXPECT_TRUE(sweep(small(), SweepAxis::kRelays, {}, 1).empty());
}

TEST(Sweep, AxisNamesRoundTrip) {
  for (auto a : {SweepAxis::kRelays, SweepAxis::kQ, SweepAxis::kLambda, SweepAxis::kGamma,
                 SweepAxis::kRegions, SweepAxis::kProtocol}) {
    EXPECT_EQ(parse_sweep_axis(to_string(a)), a);
  }
  EXPECT_THROW(parse_sweep_axis("zeta"), std::invalid_argument);
}

TEST(Sweep, ApplyAxis) {
  const SimConfig base = small();
  EXPECT_EQ(apply_axis(base, SweepAxis::kRelays, "64").relays, 64);
  EXPECT_NEAR(apply_axis(base, SweepAxis::kRelays, "64").phy.gamma(), 8.0, 1e-9);
  EXPECT_DOUBLE_EQ(std::get<RandomWalk>(apply_axis(base, SweepAxis::kQ, "0.4").mobility).q, 0.4);
  const SimConfig g = apply_axis(base, SweepAxis::kGamma, "20");
  EXPECT_NEAR(g.phy.gamma(), 20.0, 1e-9);
  EXPECT_FALSE(g.gamma_exponent.has_value());
  EXPECT_EQ(apply_axis(base, SweepAxis::kProtocol, "dfsc:3").protocol,
            (ProtocolSpec{ProtocolKind::kDfsc, 3}));
  EXPECT_EQ(apply_axis(base, SweepAxis::kRegions, "7").regions, 7);
  EXPECT_THROW(apply_axis(base, SweepAxis::kRelays, "2.5"), std::invalid_argument);
  EXPECT_THROW(apply_axis(base, SweepAxis::kGamma, "1"), std::invalid_argument);
  EXPECT_THROW(apply_axis(base, SweepAxis::kLambda, "abc"), std::invalid_argument);
}

TEST(StableRate, SingleRelayNearHalf) {
  SimConfig c = single_relay();
  c.horizon = 60000;
  c.warmup = -1;
  const auto b = max_stable_rate(c, 0.05, 0.95, 0.05);
  EXPECT_LT(b.lambda_unstable - b.lambda_stable, 0.05 + 1e-12);
  EXPECT_GT(b.lambda_stable, 0.35);
  EXPECT_LE(b.lambda_stable, 0.5);
  EXPECT_GE(b.lambda_unstable, 0.45);
}

TEST(StableRate, DeadProtocolHasNoStableRate) {
  SimConfig c = small(20, 20000);
  c.protocol = {ProtocolKind::kAf, 1};
  int calls = 0;
  const auto b = max_stable_rate(c, 0.001, 0.5, 0.05,
                                 [&](double, const RunMetrics&) { ++calls; });
  EXPECT_DOUBLE_EQ(b.lambda_stable, 0.001);
  EXPECT_LT(b.lambda_unstable, 0.06);
  EXPECT_EQ(calls, b.steps);
}

TEST(StableRate, RejectsBadInterval) {
  EXPECT_THROW(max_stable_rate(small(), 0.5, 0.4, 0.01), std::invalid_argument);
}

TEST(Metrics, ScalarNamesAreStable) {
  const auto m = scalar_metrics(RunMetrics{});
  ASSERT_FALSE(m.empty());
  EXPECT_EQ(m.front().first, "throughput_bps");
}

}  // namespace
}  // namespace obdwf
