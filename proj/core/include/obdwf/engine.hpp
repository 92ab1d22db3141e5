#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "obdwf/channel.hpp"
#include "obdwf/geometry.hpp"
#include "obdwf/protocols.hpp"
#include "obdwf/traffic.hpp"

namespace obdwf {

/// Raised by validate(SimConfig) before any frame is simulated.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StabilityThresholds {
  double slope_eps = 1e-4;  // packets per frame
  double c_tail = 3.0;
};

struct StabilityVerdict {
  bool stable = true;
  double slope = 0.0;       // least-squares trend of the post-warmup window
  double tail_mean = 0.0;   // mean over the final decile
  double window_mean = 0.0; // mean over the whole post-warmup window

  friend bool operator==(const StabilityVerdict&, const StabilityVerdict&) = default;
};

/// Finite-horizon surrogate for queue stability: stable iff the trend slope
/// of the post-warmup window is below slope_eps and the final-decile mean is
/// at most c_tail times the window mean. Throws std::invalid_argument when
/// fewer than two samples follow the warmup.
StabilityVerdict assess_stability(std::span<const double> trajectory,
                                  std::size_t warmup,
                                  const StabilityThresholds& thresholds = {});
StabilityVerdict assess_stability(std::span<const std::uint32_t> trajectory,
                                  std::size_t warmup,
                                  const StabilityThresholds& thresholds = {});

struct SimConfig {
  int relays = 110;  // K
  double radius = 2.5;
  int regions = 5;   // M
  MobilityModel mobility = RandomWalk{0.2};
  /// Re-draw a relay's point every frame, not only on a region change.
  bool resample_on_stay = false;

  PhyParams phy = PhyParams::from_beta(110.0);
  /// When set, the rate follows the relay count as gamma = K^exponent, i.e.
  /// beta = K^(exponent * alpha / 2). The experiment default 0.5 with
  /// alpha = 4 gives R = W log2 K.
  std::optional<double> gamma_exponent = 0.5;
  FadingModel fading = RayleighFading{};
  bool direct_link = true;

  ArrivalDistribution arrivals = ArrivalDistribution::none();
  bool infinite_backlog = false;
  /// Bits per packet; 0 derives R * tau.
  double packet_bits = 0.0;
  std::size_t buffer_capacity = kUnbounded;

  ProtocolSpec protocol{};

  std::int64_t horizon = 100000;
  /// Negative selects the default of 10% of the horizon.
  std::int64_t warmup = -1;
  std::uint64_t seed = 1;

  StabilityThresholds stability{};
  std::int64_t conservation_interval = 10000;
  /// Evaluate every relay link each frame to report endpoint connectivity.
  bool track_connectivity = false;
  std::size_t trajectory_points = 2000;

  std::int64_t effective_warmup() const;
  double effective_packet_bits() const;
};

/// Re-derives the rate from the relay count when gamma_exponent is set.
void apply_rate_rule(SimConfig& config);

/// Throws ConfigError on an invalid configuration; returns warnings for
/// suspicious but runnable ones.
std::vector<std::string> validate(const SimConfig& config);

struct RunMetrics {
  std::int64_t frames = 0;  // post-warmup frames measured
  double slot_s = 0.0;
  double throughput_bps = 0.0;
  std::uint64_t delivered = 0;  // within the measured window
  std::uint64_t arrivals = 0;   // over the whole run

  double delay_mean_frames = 0.0;
  double delay_p50_frames = 0.0;
  double delay_p95_frames = 0.0;
  double delay_p99_frames = 0.0;

  std::vector<std::uint32_t> source_trajectory;  // decimated Q_s(t)
  std::int64_t trajectory_stride = 1;
  double mean_source_queue = 0.0;
  double mean_relay_occupancy = 0.0;  // mean of sum_k Q_k(t)
  std::uint64_t max_relay_queue = 0;
  std::uint64_t source_drops = 0;
  std::uint64_t relay_drops = 0;

  std::uint64_t service_count = 0;
  std::int64_t service_rho_total = 0;
  std::int64_t service_eta_total = 0;
  std::int64_t service_frames_total = 0;
  double mean_rho = 0.0;
  double mean_eta = 0.0;
  double mean_service = 0.0;
  double service_second_moment = 0.0;

  double broadcast_fraction = 0.0;
  double forward_fraction = 0.0;
  double idle_fraction = 0.0;
  /// Fractions of measured frames with at least one connected relay on the
  /// source / destination side; -1 unless connectivity tracking is on.
  double source_connectivity = -1.0;
  double dest_connectivity = -1.0;
  double both_connectivity = -1.0;

  StabilityVerdict source_stability;
  StabilityVerdict relay_stability;  // aggregate relay occupancy

  double first_half_throughput_bps = 0.0;
  double second_half_throughput_bps = 0.0;

  std::uint64_t conservation_checks = 0;
  std::uint64_t conservation_violations = 0;
  std::uint64_t lindley_violations = 0;
  std::uint64_t stale_copy_violations = 0;
  /// Frames where one relay queue exceeds the aggregate, plus one if an
  /// OBDWF run with a finite source has a stable source queue and an
  /// unstable aggregate relay queue.
  std::uint64_t dominance_violations = 0;

  bool stable() const { return source_stability.stable && relay_stability.stable; }

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

/// Simulates config.horizon frames. Each frame: arrivals, mobility, channel
/// draws, protocol step, metric update. Deterministic in config.seed.
RunMetrics run(const SimConfig& config);

/// run() with the source never empty; the arrival process is ignored.
RunMetrics infinite_backlog_run(SimConfig config);

/// Named scalar metrics extracted from a run, in a fixed order.
std::vector<std::pair<std::string, double>> scalar_metrics(const RunMetrics& m);

struct Aggregate {
  double mean = 0.0;
  double ci_low = 0.0;   // NaN when n < 2
  double ci_high = 0.0;  // NaN when n < 2
  std::size_t n = 0;
};

/// Mean with a normal-approximation 95% interval.
Aggregate aggregate(std::span<const double> values);

struct ReplicateResult {
  std::vector<RunMetrics> runs;
  std::vector<std::pair<std::string, Aggregate>> metrics;

  const Aggregate& metric(const std::string& name) const;
};

/// Runs n_reps replications with seeds seed, seed+1, ... on up to `jobs`
/// threads (0 = hardware concurrency). Results do not depend on `jobs`.
ReplicateResult replicate(const SimConfig& config, int n_reps, int jobs = 1);

enum class SweepAxis { kRelays, kQ, kLambda, kGamma, kRegions, kProtocol };

/// Accepts K, q, lambda, gamma, M, protocol. Throws std::invalid_argument.
SweepAxis parse_sweep_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

/// Returns a copy of `base` with the axis set to `value`.
SimConfig apply_axis(const SimConfig& base, SweepAxis axis,
                     const std::string& value);

struct SweepRow {
  std::string value;
  ReplicateResult result;
};

std::vector<SweepRow> sweep(const SimConfig& base, SweepAxis axis,
                            const std::vector<std::string>& values, int n_reps,
                            int jobs = 1);

struct StableRateBracket {
  double lambda_stable = 0.0;
  double lambda_unstable = 0.0;
  int steps = 0;
};

/// Bisection on Bernoulli arrival rate using the run's stability verdict on
/// the source and aggregate relay queues. Always performs at least one step.
StableRateBracket max_stable_rate(
    const SimConfig& config, double lo, double hi, double resolution,
    const std::function<void(double, const RunMetrics&)>& observer = {});

}  // namespace obdwf
