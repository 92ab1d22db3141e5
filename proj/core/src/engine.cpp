#include "obdwf/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace obdwf {

// ---------------------------------------------------------------------------
// Stability

namespace {

template <typename T>
StabilityVerdict assess(std::span<const T> q, std::size_t warmup,
                        const StabilityThresholds& thresholds) {
  if (q.size() < warmup + 2) {
    throw std::invalid_argument("trajectory too short for the requested warmup");
  }
  const std::size_t n = q.size() - warmup;
  const double t_mean = 0.5 * static_cast<double>(n - 1);
  double q_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    q_sum += static_cast<double>(q[warmup + i]);
  }
  const double q_mean = q_sum / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(i) - t_mean;
    sxy += dt * (static_cast<double>(q[warmup + i]) - q_mean);
    sxx += dt * dt;
  }
  const std::size_t tail_len = std::max<std::size_t>(1, n / 10);
  double tail_sum = 0.0;
  for (std::size_t i = n - tail_len; i < n; ++i) {
    tail_sum += static_cast<double>(q[warmup + i]);
  }
  StabilityVerdict v;
  v.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  v.window_mean = q_mean;
  v.tail_mean = tail_sum / static_cast<double>(tail_len);
  v.stable = v.slope < thresholds.slope_eps &&
             v.tail_mean <= thresholds.c_tail * v.window_mean;
  return v;
}

}  // namespace

StabilityVerdict assess_stability(std::span<const double> trajectory,
                                  std::size_t warmup,
                                  const StabilityThresholds& thresholds) {
  return assess(trajectory, warmup, thresholds);
}

StabilityVerdict assess_stability(std::span<const std::uint32_t> trajectory,
                                  std::size_t warmup,
                                  const StabilityThresholds& thresholds) {
  return assess(trajectory, warmup, thresholds);
}

// ---------------------------------------------------------------------------
// Configuration

std::int64_t SimConfig::effective_warmup() const {
  return warmup >= 0 ? warmup : horizon / 10;
}

double SimConfig::effective_packet_bits() const {
  return packet_bits > 0.0 ? packet_bits : phy.bits_per_slot();
}

void apply_rate_rule(SimConfig& config) {
  if (!config.gamma_exponent) {
    return;
  }
  const double k = static_cast<double>(config.relays);
  const double beta = std::pow(k, *config.gamma_exponent * config.phy.alpha / 2.0);
  config.phy.rate_bps = config.phy.bandwidth_hz * std::log2(beta);
}

std::vector<std::string> validate(const SimConfig& config) {
  std::vector<std::string> warnings;
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (config.relays < 1) fail("relay count K must be at least 1");
  if (!(config.radius > 0.0)) fail("disk radius must be positive");
  if (config.regions < 1) fail("region count M must be at least 1");
  if (config.horizon <= 0) fail("horizon must be positive");
  if (config.effective_warmup() >= config.horizon) fail("warmup must be shorter than the horizon");
  if (config.conservation_interval <= 0) fail("conservation interval must be positive");
  if (!(config.stability.slope_eps > 0.0) || !(config.stability.c_tail > 0.0)) {
    fail("stability thresholds must be positive");
  }
  try {
    validate(config.mobility);
    validate(config.phy);
    validate(config.fading);
    Protocol probe(config.protocol);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (config.gamma_exponent && !(*config.gamma_exponent > 0.0 && *config.gamma_exponent <= 1.0)) {
    fail("gamma exponent must lie in (0, 1]");
  }
  if (config.relays >= 0xFFFFFFF) fail("too many relays");
  const double slot_bits = config.phy.bits_per_slot();
  if (config.packet_bits > 0.0 &&
      std::abs(config.packet_bits - slot_bits) > 1e-9 * slot_bits) {
    std::ostringstream msg;
    msg << "packet size " << config.packet_bits << " bits differs from R*tau = " << slot_bits
        << " bits; each packet still occupies one transmission slot";
    warnings.push_back(msg.str());
  }
  const std::int64_t window = config.horizon - config.effective_warmup();
  if (window < 200000) {
    warnings.push_back("post-warmup window shorter than 2e5 frames; stability verdicts are weak");
  }
  return warnings;
}

// ---------------------------------------------------------------------------
// Frame loop

namespace {

double quantile_nearest_rank(std::vector<std::int64_t>& values, double p) {
  if (values.empty()) {
    return 0.0;
  }
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   values.end());
  return static_cast<double>(values[rank - 1]);
}

class Simulation {
 public:
  explicit Simulation(const SimConfig& config)
      : cfg_(config),
        geometry_(config.radius, config.regions),
        k_(static_cast<std::size_t>(config.relays)),
        links_(config.phy, config.fading, config.seed, k_, config.direct_link),
        net_(k_, config.buffer_capacity),
        protocol_(config.protocol),
        buffers_decodes_(config.protocol.kind == ProtocolKind::kObdwf),
        positions_(k_) {
    links_.set_direct_distance(distance(geometry_.source(), geometry_.destination()));
    const auto* waypoint = std::get_if<RandomWaypoint>(&cfg_.mobility);
    if (waypoint != nullptr) {
      waypoints_.resize(k_);
    }
    for (std::size_t j = 0; j < k_; ++j) {
      CounterRng rng(cfg_.seed, Stream::kInit, 0, static_cast<std::uint32_t>(j));
      if (waypoint != nullptr) {
        waypoints_[j] = initial_waypoint(geometry_, *waypoint, rng);
        positions_[j] = {region_of(geometry_, waypoints_[j].point), waypoints_[j].point};
      } else {
        positions_[j] = sample_uniform_disk(geometry_, rng);
      }
      refresh_distances(j);
    }
  }

  RunMetrics execute();

 private:
  void refresh_distances(std::size_t j) {
    links_.set_relay_distances(j, distance(positions_[j].point, geometry_.source()),
                               distance(positions_[j].point, geometry_.destination()));
  }

  std::uint32_t admit_arrivals(std::int64_t t);
  void move_relays(std::int64_t t);
  void check_conservation();

  PacketId new_packet(std::int64_t t) {
    const PacketId id = arrival_frame_.size();
    arrival_frame_.push_back(t);
    delivered_flag_.push_back(0);
    ++metrics_.arrivals;
    return id;
  }

  SimConfig cfg_;
  DiskGeometry geometry_;
  std::size_t k_;
  FrameLinks links_;
  RelayNetwork net_;
  Protocol protocol_;
  bool buffers_decodes_;
  std::vector<RelayPosition> positions_;
  std::vector<WaypointState> waypoints_;

  std::vector<std::int64_t> arrival_frame_;
  std::vector<char> delivered_flag_;
  std::uint64_t total_delivered_ = 0;
  RunMetrics metrics_;
};

std::uint32_t Simulation::admit_arrivals(std::int64_t t) {
  std::uint32_t admitted = 0;
  if (cfg_.infinite_backlog) {
    if (net_.source.empty()) {
      const PacketId id = new_packet(t);
      net_.source.enqueue(Packet{id, cfg_.effective_packet_bits(), t, std::nullopt});
      admitted = 1;
    }
    return admitted;
  }
  CounterRng rng(cfg_.seed, Stream::kArrivals, static_cast<std::uint64_t>(t));
  const std::uint32_t batch = sample_arrivals(cfg_.arrivals, rng);
  for (std::uint32_t i = 0; i < batch; ++i) {
    const PacketId id = new_packet(t);
    if (net_.source.enqueue(Packet{id, cfg_.effective_packet_bits(), t, std::nullopt})) {
      ++admitted;
    }
  }
  return admitted;
}

void Simulation::move_relays(std::int64_t t) {
  if (const auto* walk = std::get_if<RandomWalk>(&cfg_.mobility)) {
    for (std::size_t j = 0; j < k_; ++j) {
      CounterRng rng(cfg_.seed, Stream::kMobility, static_cast<std::uint64_t>(t),
                     static_cast<std::uint32_t>(j));
      const int next = step_random_walk(positions_[j].region, walk->q, cfg_.regions, rng);
      if (next != positions_[j].region || cfg_.resample_on_stay) {
        positions_[j] = sample_uniform_in_region(geometry_, next, rng);
        refresh_distances(j);
      }
    }
    return;
  }
  const auto& model = std::get<RandomWaypoint>(cfg_.mobility);
  for (std::size_t j = 0; j < k_; ++j) {
    CounterRng rng(cfg_.seed, Stream::kMobility, static_cast<std::uint64_t>(t),
                   static_cast<std::uint32_t>(j));
    const WaypointState next = step_waypoint(waypoints_[j], geometry_, model, rng);
    const bool moved = !(next.point == waypoints_[j].point);
    waypoints_[j] = next;
    if (moved) {
      positions_[j] = {region_of(geometry_, next.point), next.point};
      refresh_distances(j);
    }
  }
}

void Simulation::check_conservation() {
  ++metrics_.conservation_checks;
  std::vector<PacketId> held;
  for (const auto& q : net_.relays) {
    held.insert(held.end(), q.ids().begin(), q.ids().end());
  }
  std::sort(held.begin(), held.end());
  held.erase(std::unique(held.begin(), held.end()), held.end());
  for (PacketId id : held) {
    if (delivered_flag_[id]) {
      ++metrics_.stale_copy_violations;
    }
  }
  const std::uint64_t accounted =
      total_delivered_ + net_.source.size() + held.size() + net_.source.drops();
  if (accounted != metrics_.arrivals) {
    ++metrics_.conservation_violations;
  }
}

RunMetrics Simulation::execute() {
  const std::int64_t horizon = cfg_.horizon;
  const std::int64_t warmup = cfg_.effective_warmup();
  const std::int64_t half = warmup + (horizon - warmup) / 2;
  const double bits = cfg_.effective_packet_bits();

  std::vector<std::uint32_t> qs(static_cast<std::size_t>(horizon));
  std::vector<std::uint32_t> qr(static_cast<std::size_t>(horizon));
  std::vector<std::int64_t> delays;

  std::uint64_t first_half = 0;
  std::uint64_t second_half = 0;
  std::uint64_t roles[3] = {0, 0, 0};
  std::uint64_t src_conn = 0, dst_conn = 0, both_conn = 0;
  double service_sq_sum = 0.0;
  double qs_sum = 0.0, qr_sum = 0.0;

  std::size_t prev_q = 0;
  bool prev_served = false;
  std::uint64_t relay_total = 0;

  for (std::int64_t t = 0; t < horizon; ++t) {
    const std::uint32_t admitted = admit_arrivals(t);
    if (t > 0) {
      const std::size_t carried = prev_q - (prev_served && prev_q > 0 ? 1 : 0);
      if (net_.source.size() != admitted + carried) {
        ++metrics_.lindley_violations;
      }
      move_relays(t);
    }
    links_.begin_frame(t);

    const auto ts = static_cast<std::size_t>(t);
    qs[ts] = static_cast<std::uint32_t>(net_.source.size());
    qr[ts] = static_cast<std::uint32_t>(relay_total);

    CounterRng contention(cfg_.seed, Stream::kContention, static_cast<std::uint64_t>(t));
    const FrameOutcome out = protocol_.step(links_, net_, contention);

    std::uint64_t after = 0;
    std::uint64_t largest = 0;
    for (const auto& q : net_.relays) {
      after += q.size();
      largest = std::max<std::uint64_t>(largest, q.size());
    }
    const std::size_t buffered = buffers_decodes_ ? out.decodes.size() : 0;
    if (after != relay_total + buffered - out.copies_removed) {
      ++metrics_.lindley_violations;
    }
    if (largest > after) {
      ++metrics_.dominance_violations;
    }
    metrics_.max_relay_queue = std::max(metrics_.max_relay_queue, largest);
    relay_total = after;
    prev_q = qs[ts];
    prev_served = out.source_dequeued;

    if (out.delivered) {
      const PacketId id = *out.delivered;
      delivered_flag_[id] = 1;
      ++total_delivered_;
      if (t >= warmup) {
        ++metrics_.delivered;
        delays.push_back(t - arrival_frame_[id]);
        (t < half ? first_half : second_half) += 1;
      }
    }

    if (t >= warmup) {
      roles[static_cast<int>(out.role)] += 1;
      qs_sum += qs[ts];
      qr_sum += qr[ts];
      if (out.service) {
        ++metrics_.service_count;
        metrics_.service_rho_total += out.service->rho;
        metrics_.service_eta_total += out.service->eta;
        metrics_.service_frames_total += out.service->total();
        const double total = static_cast<double>(out.service->total());
        service_sq_sum += total * total;
      }
      if (cfg_.track_connectivity) {
        bool any_src = false;
        bool any_dst = false;
        for (std::size_t j = 0; j < k_ && !(any_src && any_dst); ++j) {
          any_src = any_src || links_.source_connected(j);
          any_dst = any_dst || links_.dest_connected(j);
        }
        src_conn += any_src;
        dst_conn += any_dst;
        both_conn += any_src && any_dst;
      }
    }

    if ((t + 1) % cfg_.conservation_interval == 0) {
      check_conservation();
    }
  }
  check_conservation();

  const std::int64_t window = horizon - warmup;
  const double w = static_cast<double>(window);
  const double slot = cfg_.phy.slot_s;
  metrics_.frames = window;
  metrics_.slot_s = slot;
  metrics_.throughput_bps = static_cast<double>(metrics_.delivered) * bits / (w * slot);
  const double first_len = static_cast<double>(half - warmup);
  const double second_len = static_cast<double>(horizon - half);
  metrics_.first_half_throughput_bps =
      first_len > 0 ? static_cast<double>(first_half) * bits / (first_len * slot) : 0.0;
  metrics_.second_half_throughput_bps =
      second_len > 0 ? static_cast<double>(second_half) * bits / (second_len * slot) : 0.0;

  if (!delays.empty()) {
    const double sum = std::accumulate(delays.begin(), delays.end(), 0.0);
    metrics_.delay_mean_frames = sum / static_cast<double>(delays.size());
    metrics_.delay_p50_frames = quantile_nearest_rank(delays, 0.50);
    metrics_.delay_p95_frames = quantile_nearest_rank(delays, 0.95);
    metrics_.delay_p99_frames = quantile_nearest_rank(delays, 0.99);
  }

  metrics_.mean_source_queue = qs_sum / w;
  metrics_.mean_relay_occupancy = qr_sum / w;
  metrics_.source_drops = net_.source.drops();
  for (const auto& q : net_.relays) {
    metrics_.relay_drops += q.drops();
  }
  if (metrics_.service_count > 0) {
    const double n = static_cast<double>(metrics_.service_count);
    metrics_.mean_rho = static_cast<double>(metrics_.service_rho_total) / n;
    metrics_.mean_eta = static_cast<double>(metrics_.service_eta_total) / n;
    metrics_.mean_service = static_cast<double>(metrics_.service_frames_total) / n;
    metrics_.service_second_moment = service_sq_sum / n;
  }
  metrics_.idle_fraction = static_cast<double>(roles[0]) / w;
  metrics_.broadcast_fraction = static_cast<double>(roles[1]) / w;
  metrics_.forward_fraction = static_cast<double>(roles[2]) / w;
  if (cfg_.track_connectivity) {
    metrics_.source_connectivity = static_cast<double>(src_conn) / w;
    metrics_.dest_connectivity = static_cast<double>(dst_conn) / w;
    metrics_.both_connectivity = static_cast<double>(both_conn) / w;
  }

  const auto warm = static_cast<std::size_t>(warmup);
  metrics_.source_stability =
      assess_stability(std::span<const std::uint32_t>(qs), warm, cfg_.stability);
  metrics_.relay_stability =
      assess_stability(std::span<const std::uint32_t>(qr), warm, cfg_.stability);
  if (cfg_.protocol.kind == ProtocolKind::kObdwf && !cfg_.infinite_backlog &&
      metrics_.source_stability.stable && !metrics_.relay_stability.stable) {
    ++metrics_.dominance_violations;
  }

  const std::size_t stride = std::max<std::size_t>(
      1, static_cast<std::size_t>(horizon) / std::max<std::size_t>(1, cfg_.trajectory_points));
  metrics_.trajectory_stride = static_cast<std::int64_t>(stride);
  for (std::size_t i = 0; i < qs.size(); i += stride) {
    metrics_.source_trajectory.push_back(qs[i]);
  }
  return metrics_;
}

}  // namespace

RunMetrics run(const SimConfig& config) {
  validate(config);
  Simulation sim(config);
  return sim.execute();
}

RunMetrics infinite_backlog_run(SimConfig config) {
  config.infinite_backlog = true;
  return run(config);
}

// ---------------------------------------------------------------------------
// Replication, sweeps, bisection

std::vector<std::pair<std::string, double>> scalar_metrics(const RunMetrics& m) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const auto delay = [&](double v) { return m.delivered > 0 ? v : nan; };
  const auto service = [&](double v) { return m.service_count > 0 ? v : nan; };
  return {
      {"throughput_bps", m.throughput_bps},
      {"delivered", static_cast<double>(m.delivered)},
      {"delay_mean_frames", delay(m.delay_mean_frames)},
      {"delay_mean_s", delay(m.delay_mean_frames * m.slot_s)},
      {"delay_p50_frames", delay(m.delay_p50_frames)},
      {"delay_p95_frames", delay(m.delay_p95_frames)},
      {"delay_p99_frames", delay(m.delay_p99_frames)},
      {"mean_source_queue", m.mean_source_queue},
      {"mean_relay_occupancy", m.mean_relay_occupancy},
      {"source_drops", static_cast<double>(m.source_drops)},
      {"relay_drops", static_cast<double>(m.relay_drops)},
      {"mean_service_frames", service(m.mean_service)},
      {"mean_rho_frames", service(m.mean_rho)},
      {"mean_eta_frames", service(m.mean_eta)},
      {"broadcast_fraction", m.broadcast_fraction},
      {"forward_fraction", m.forward_fraction},
      {"stable", m.stable() ? 1.0 : 0.0},
  };
}

Aggregate aggregate(std::span<const double> values) {
  Aggregate a;
  a.n = values.size();
  if (values.empty()) {
    a.mean = a.ci_low = a.ci_high = std::numeric_limits<double>::quiet_NaN();
    return a;
  }
  const double n = static_cast<double>(values.size());
  a.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) {
    a.ci_low = a.ci_high = std::numeric_limits<double>::quiet_NaN();
    return a;
  }
  double ss = 0.0;
  for (double v : values) {
    ss += (v - a.mean) * (v - a.mean);
  }
  const double half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  a.ci_low = a.mean - half;
  a.ci_high = a.mean + half;
  return a;
}

const Aggregate& ReplicateResult::metric(const std::string& name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) {
      return value;
    }
  }
  throw std::out_of_range("no metric named '" + name + "'");
}

ReplicateResult replicate(const SimConfig& config, int n_reps, int jobs) {
  if (n_reps < 1) {
    throw std::invalid_argument("need at least one replication");
  }
  validate(config);
  ReplicateResult result;
  result.runs.resize(static_cast<std::size_t>(n_reps));

  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                              : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n_reps));

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  const auto work = [&](unsigned worker) {
    try {
      for (int i = next++; i < n_reps; i = next++) {
        SimConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(i);
        result.runs[static_cast<std::size_t>(i)] = run(c);
      }
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work, w);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  const auto names = scalar_metrics(result.runs.front());
  for (std::size_t m = 0; m < names.size(); ++m) {
    std::vector<double> values;
    values.reserve(result.runs.size());
    for (const auto& r : result.runs) {
      values.push_back(scalar_metrics(r)[m].second);
    }
    result.metrics.emplace_back(names[m].first, aggregate(values));
  }
  return result;
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "K" || name == "k" || name == "relays") return SweepAxis::kRelays;
  if (name == "q") return SweepAxis::kQ;
  if (name == "lambda" || name == "lambda_s") return SweepAxis::kLambda;
  if (name == "gamma") return SweepAxis::kGamma;
  if (name == "M" || name == "m" || name == "regions") return SweepAxis::kRegions;
  if (name == "protocol") return SweepAxis::kProtocol;
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kRelays: return "K";
    case SweepAxis::kQ: return "q";
    case SweepAxis::kLambda: return "lambda";
    case SweepAxis::kGamma: return "gamma";
    case SweepAxis::kRegions: return "M";
    case SweepAxis::kProtocol: return "protocol";
  }
  return "unknown";
}

namespace {

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

SimConfig apply_axis(const SimConfig& base, SweepAxis axis,
                     const std::string& value) {
  SimConfig c = base;
  switch (axis) {
    case SweepAxis::kRelays: {
      const double k = parse_number(value);
      if (k < 1 || k != std::floor(k)) {
        throw std::invalid_argument("relay count must be a positive integer");
      }
      c.relays = static_cast<int>(k);
      apply_rate_rule(c);
      break;
    }
    case SweepAxis::kQ: {
      auto* walk = std::get_if<RandomWalk>(&c.mobility);
      if (walk == nullptr) {
        throw std::invalid_argument("q axis needs random-walk mobility");
      }
      walk->q = parse_number(value);
      break;
    }
    case SweepAxis::kLambda:
      c.arrivals = ArrivalDistribution::bernoulli(parse_number(value));
      c.infinite_backlog = false;
      break;
    case SweepAxis::kGamma: {
      const double gamma = parse_number(value);
      if (!(gamma > 1.0)) {
        throw std::invalid_argument("gamma must exceed 1");
      }
      c.gamma_exponent.reset();
      c.phy.rate_bps = c.phy.bandwidth_hz * std::log2(std::pow(gamma, c.phy.alpha / 2.0));
      break;
    }
    case SweepAxis::kRegions: {
      const double m = parse_number(value);
      if (m < 1 || m != std::floor(m)) {
        throw std::invalid_argument("region count must be a positive integer");
      }
      c.regions = static_cast<int>(m);
      break;
    }
    case SweepAxis::kProtocol:
      c.protocol = parse_protocol_spec(value, base.protocol.combining > 1 ? base.protocol.combining : 5);
      break;
  }
  return c;
}

std::vector<SweepRow> sweep(const SimConfig& base, SweepAxis axis,
                            const std::vector<std::string>& values, int n_reps,
                            int jobs) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (const auto& v : values) {
    rows.push_back({v, replicate(apply_axis(base, axis, v), n_reps, jobs)});
  }
  return rows;
}

StableRateBracket max_stable_rate(
    const SimConfig& config, double lo, double hi, double resolution,
    const std::function<void(double, const RunMetrics&)>& observer) {
  if (!(lo > 0.0 && lo < hi && hi <= 1.0)) {
    throw std::invalid_argument("stable-rate bounds must satisfy 0 < lo < hi <= 1");
  }
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("resolution must be positive");
  }
  StableRateBracket b{lo, hi, 0};
  do {
    const double mid = 0.5 * (b.lambda_stable + b.lambda_unstable);
    SimConfig c = config;
    c.infinite_backlog = false;
    c.arrivals = ArrivalDistribution::bernoulli(mid);
    const RunMetrics m = run(c);
    if (observer) {
      observer(mid, m);
    }
    if (m.stable()) {
      b.lambda_stable = mid;
    } else {
      b.lambda_unstable = mid;
    }
    ++b.steps;
  } while (b.lambda_unstable - b.lambda_stable > resolution);
  return b;
}

}  // namespace obdwf
