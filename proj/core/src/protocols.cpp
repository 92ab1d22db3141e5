#include "obdwf/protocols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace obdwf {

namespace {

constexpr std::uint32_t kDirectLinkIndex = 0xFFFFFFFFu;

double path_loss(double distance, double alpha) {
  return std::pow(std::max(distance, kMinDistance), alpha);
}

}  // namespace

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::kObdwf: return "obdwf";
    case ProtocolKind::kDdf: return "ddf";
    case ProtocolKind::kAf: return "af";
    case ProtocolKind::kAfsc: return "afsc";
    case ProtocolKind::kDfsc: return "dfsc";
  }
  return "unknown";
}

ProtocolKind parse_protocol_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  lower.erase(std::remove(lower.begin(), lower.end(), '-'), lower.end());
  for (auto kind : {ProtocolKind::kObdwf, ProtocolKind::kDdf, ProtocolKind::kAf,
                    ProtocolKind::kAfsc, ProtocolKind::kDfsc}) {
    if (lower == to_string(kind)) {
      return kind;
    }
  }
  throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

std::string to_string(const ProtocolSpec& spec) {
  std::string out(to_string(spec.kind));
  if (spec.kind == ProtocolKind::kAfsc || spec.kind == ProtocolKind::kDfsc) {
    out += ":" + std::to_string(spec.combining);
  }
  return out;
}

ProtocolSpec parse_protocol_spec(std::string_view text, int default_combining) {
  ProtocolSpec spec;
  const auto colon = text.find(':');
  spec.kind = parse_protocol_kind(text.substr(0, colon));
  spec.combining = default_combining;
  if (colon != std::string_view::npos) {
    const std::string count(text.substr(colon + 1));
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != count.size() || count.empty() || n < 1) {
      throw std::invalid_argument("bad combining size in '" + std::string(text) + "'");
    }
    spec.combining = n;
  }
  if (spec.kind != ProtocolKind::kAfsc && spec.kind != ProtocolKind::kDfsc) {
    spec.combining = 1;
  }
  return spec;
}

std::string_view to_string(FrameRole role) {
  switch (role) {
    case FrameRole::kIdle: return "idle";
    case FrameRole::kBroadcast: return "broadcast";
    case FrameRole::kRelayForward: return "relay-forward";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// FrameLinks

FrameLinks::FrameLinks(const PhyParams& phy, const FadingModel& fading,
                       std::uint64_t seed, std::size_t relay_count,
                       bool direct_link_enabled)
    : phy_(phy),
      fading_(fading),
      seed_(seed),
      sampled_(true),
      direct_enabled_(direct_link_enabled),
      src_distance_(relay_count, 1.0),
      dst_distance_(relay_count, 1.0),
      src_path_loss_(relay_count, 1.0),
      dst_path_loss_(relay_count, 1.0),
      src_cache_(relay_count),
      dst_cache_(relay_count),
      direct_cache_(1),
      src_ready_(relay_count, 0),
      dst_ready_(relay_count, 0),
      direct_ready_(1, 0) {}

FrameLinks FrameLinks::fixed(const PhyParams& phy,
                             std::vector<std::pair<double, double>> source_side,
                             std::vector<std::pair<double, double>> dest_side,
                             std::optional<std::pair<double, double>> direct) {
  if (source_side.size() != dest_side.size()) {
    throw std::invalid_argument("source-side and destination-side draws differ in length");
  }
  FrameLinks links(phy, RayleighFading{}, 0, source_side.size(), direct.has_value());
  links.sampled_ = false;
  links.fixed_src_gain_.resize(source_side.size());
  links.fixed_dst_gain_.resize(dest_side.size());
  for (std::size_t j = 0; j < source_side.size(); ++j) {
    links.fixed_src_gain_[j] = source_side[j].first;
    links.fixed_dst_gain_[j] = dest_side[j].first;
    links.set_relay_distances(j, source_side[j].second, dest_side[j].second);
  }
  if (direct) {
    links.fixed_direct_gain_ = direct->first;
    links.set_direct_distance(direct->second);
  }
  return links;
}

void FrameLinks::begin_frame(std::int64_t frame) {
  frame_ = frame;
  std::fill(src_ready_.begin(), src_ready_.end(), 0);
  std::fill(dst_ready_.begin(), dst_ready_.end(), 0);
  direct_ready_[0] = 0;
}

void FrameLinks::set_relay_distances(std::size_t relay, double to_source,
                                     double to_dest) {
  src_distance_[relay] = to_source;
  dst_distance_[relay] = to_dest;
  src_path_loss_[relay] = path_loss(to_source, phy_.alpha);
  dst_path_loss_[relay] = path_loss(to_dest, phy_.alpha);
  src_ready_[relay] = 0;
  dst_ready_[relay] = 0;
}

void FrameLinks::set_direct_distance(double d) {
  direct_distance_ = d;
  direct_path_loss_ = path_loss(d, phy_.alpha);
  direct_ready_[0] = 0;
}

const LinkDraw& FrameLinks::draw(std::uint32_t link_index, double distance,
                                 double loss, std::vector<LinkDraw>& cache,
                                 std::vector<char>& ready,
                                 std::size_t slot) const {
  if (!ready[slot]) {
    double gain;
    if (sampled_) {
      CounterRng rng(seed_, Stream::kFading, static_cast<std::uint64_t>(frame_),
                     link_index);
      gain = draw_fading(fading_, rng);
    } else if (link_index == kDirectLinkIndex) {
      gain = fixed_direct_gain_;
    } else if (link_index % 2 == 0) {
      gain = fixed_src_gain_[link_index / 2];
    } else {
      gain = fixed_dst_gain_[link_index / 2];
    }
    LinkDraw& link = cache[slot];
    link.gain = gain;
    link.distance = distance;
    link.snr = phy_.power * phy_.xi * gain / loss;
    link.rate_bps = rate_from_snr(link.snr, phy_);
    ready[slot] = 1;
  }
  return cache[slot];
}

const LinkDraw& FrameLinks::source_side(std::size_t relay) const {
  return draw(static_cast<std::uint32_t>(2 * relay), src_distance_[relay],
              src_path_loss_[relay], src_cache_, src_ready_, relay);
}

const LinkDraw& FrameLinks::dest_side(std::size_t relay) const {
  return draw(static_cast<std::uint32_t>(2 * relay + 1), dst_distance_[relay],
              dst_path_loss_[relay], dst_cache_, dst_ready_, relay);
}

const LinkDraw& FrameLinks::direct() const {
  return draw(kDirectLinkIndex, direct_distance_, direct_path_loss_,
              direct_cache_, direct_ready_, 0);
}

bool FrameLinks::source_connected(std::size_t relay) const {
  return source_side(relay).rate_bps >= phy_.rate_bps;
}

bool FrameLinks::dest_connected(std::size_t relay) const {
  return dest_side(relay).rate_bps >= phy_.rate_bps;
}

bool FrameLinks::direct_connected() const {
  return direct_enabled_ && direct().rate_bps >= phy_.rate_bps;
}

double FrameLinks::source_strength(std::size_t relay) const {
  return source_side(relay).gain / src_path_loss_[relay];
}

double FrameLinks::dest_strength(std::size_t relay) const {
  return dest_side(relay).gain / dst_path_loss_[relay];
}

// ---------------------------------------------------------------------------

RelayNetwork::RelayNetwork(std::size_t relay_count, std::size_t capacity)
    : source(capacity), relays(relay_count, RelayQueue(capacity)) {}

std::uint32_t contention_select(std::span<const std::uint32_t> contenders,
                                CounterRng& rng) {
  if (contenders.empty()) {
    throw std::invalid_argument("contention among an empty set");
  }
  return contenders[uniform_below(rng, contenders.size())];
}

FrameOutcome obdwf_step(ObdwfState& /*state*/, const FrameLinks& links,
                        RelayNetwork& net, CounterRng& rng) {
  FrameOutcome out;
  const std::size_t k = net.relays.size();

  std::vector<std::uint32_t> contenders;
  for (std::size_t j = 0; j < k; ++j) {
    if (!net.relays[j].empty() && links.dest_connected(j)) {
      contenders.push_back(static_cast<std::uint32_t>(j));
    }
  }
  if (!contenders.empty()) {
    const std::uint32_t winner = contention_select(contenders, rng);
    const PacketId id = net.relays[winner].head();
    out.copies_removed = dequeue_id(net.relays, id);
    out.role = FrameRole::kRelayForward;
    out.delivered = id;
    return out;
  }

  if (net.source.empty()) {
    return out;
  }
  out.role = FrameRole::kBroadcast;
  const PacketId id = net.source.head().id;
  if (links.direct_connected()) {
    net.source.pop();
    out.source_dequeued = true;
    out.direct_delivery = true;
    out.delivered = id;
    return out;
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (links.source_connected(j) && net.relays[j].enqueue(id)) {
      out.decodes.push_back({static_cast<std::uint32_t>(j), id});
    }
  }
  if (!out.decodes.empty()) {
    net.source.pop();
    out.source_dequeued = true;
  }
  return out;
}

namespace {

void reset(DecodeForwardState& state) {
  for (auto j : state.holders) {
    state.holds[j] = 0;
  }
  state.holders.clear();
  state.phase = DecodeForwardState::Phase::kBroadcast;
  state.rho = 0;
  state.eta = 0;
}

FrameOutcome complete(DecodeForwardState& state, RelayNetwork& net,
                      FrameRole role) {
  FrameOutcome out;
  out.role = role;
  out.delivered = net.source.pop().id;
  out.source_dequeued = true;
  out.service = ServiceSample{state.rho, state.eta};
  reset(state);
  return out;
}

// Shared phase I of DDF and DF-SC. Returns the outcome of a broadcast frame
// and moves to phase II once `needed` relays hold the packet.
FrameOutcome decode_forward_broadcast(DecodeForwardState& state,
                                      const FrameLinks& links,
                                      RelayNetwork& net, std::size_t needed) {
  const std::size_t k = links.relay_count();
  if (state.holds.size() != k) {
    state.holds.assign(k, 0);
  }
  ++state.rho;
  if (links.direct_connected()) {
    FrameOutcome out = complete(state, net, FrameRole::kBroadcast);
    out.direct_delivery = true;
    return out;
  }
  FrameOutcome out;
  out.role = FrameRole::kBroadcast;
  const PacketId id = net.source.head().id;
  for (std::size_t j = 0; j < k; ++j) {
    if (!state.holds[j] && links.source_connected(j)) {
      state.holds[j] = 1;
      state.holders.push_back(static_cast<std::uint32_t>(j));
      out.decodes.push_back({static_cast<std::uint32_t>(j), id});
    }
  }
  if (!state.holders.empty() && state.holders.size() >= needed) {
    state.phase = DecodeForwardState::Phase::kForward;
  }
  return out;
}

}  // namespace

FrameOutcome ddf_step(DecodeForwardState& state, const FrameLinks& links,
                      RelayNetwork& net) {
  if (state.phase == DecodeForwardState::Phase::kBroadcast) {
    if (net.source.empty()) {
      return {};
    }
    return decode_forward_broadcast(state, links, net, 1);
  }
  ++state.eta;
  for (auto j : state.holders) {
    if (links.dest_connected(j)) {
      return complete(state, net, FrameRole::kRelayForward);
    }
  }
  FrameOutcome out;
  out.role = FrameRole::kRelayForward;
  return out;
}

FrameOutcome dfsc_step(DecodeForwardState& state, const FrameLinks& links,
                       RelayNetwork& net, int n_d) {
  if (n_d < 1) {
    throw std::invalid_argument("N_D must be at least 1");
  }
  if (state.phase == DecodeForwardState::Phase::kBroadcast) {
    if (net.source.empty()) {
      return {};
    }
    return decode_forward_broadcast(state, links, net,
                                    static_cast<std::size_t>(n_d));
  }
  ++state.eta;
  double snr = 0.0;
  for (auto j : state.holders) {
    snr += links.dest_side(j).snr;
  }
  if (rate_from_snr(snr, links.phy()) >= links.phy().rate_bps) {
    return complete(state, net, FrameRole::kRelayForward);
  }
  FrameOutcome out;
  out.role = FrameRole::kRelayForward;
  return out;
}

FrameOutcome afsc_step(AmplifyForwardState& state, const FrameLinks& links,
                       RelayNetwork& net, int n_a) {
  if (n_a < 1) {
    throw std::invalid_argument("N_A must be at least 1");
  }
  const std::size_t k = links.relay_count();
  FrameOutcome out;
  if (state.phase == AmplifyForwardState::Phase::kListen) {
    if (net.source.empty()) {
      return out;
    }
    out.role = FrameRole::kBroadcast;
    state.listen_strength.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      state.listen_strength[j] = links.source_strength(j);
    }
    ++state.rho;
    state.phase = AmplifyForwardState::Phase::kForward;
    return out;
  }

  out.role = FrameRole::kRelayForward;
  ++state.eta;
  const double p = links.phy().power;
  std::vector<double> metric(k);
  for (std::size_t j = 0; j < k; ++j) {
    metric[j] = af_effective_snr(state.listen_strength[j], links.dest_strength(j), p);
  }
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(n_a), k);
  std::partial_sort(metric.begin(), metric.begin() + static_cast<std::ptrdiff_t>(take),
                    metric.end(), std::greater<>());
  const double combined =
      std::accumulate(metric.begin(), metric.begin() + static_cast<std::ptrdiff_t>(take), 0.0);
  const double rate = rate_from_snr(links.phy().xi * combined, links.phy());
  state.phase = AmplifyForwardState::Phase::kListen;
  if (rate >= links.phy().rate_bps) {
    out.delivered = net.source.pop().id;
    out.source_dequeued = true;
    out.service = ServiceSample{state.rho, state.eta};
    state.rho = 0;
    state.eta = 0;
  }
  return out;
}

FrameOutcome af_step(AmplifyForwardState& state, const FrameLinks& links,
                     RelayNetwork& net) {
  return afsc_step(state, links, net, 1);
}

Protocol::Protocol(ProtocolSpec spec) : spec_(spec) {
  switch (spec.kind) {
    case ProtocolKind::kObdwf:
      state_ = ObdwfState{};
      break;
    case ProtocolKind::kDdf:
    case ProtocolKind::kDfsc:
      state_ = DecodeForwardState{};
      break;
    case ProtocolKind::kAf:
    case ProtocolKind::kAfsc:
      state_ = AmplifyForwardState{};
      break;
  }
  if ((spec.kind == ProtocolKind::kAfsc || spec.kind == ProtocolKind::kDfsc) &&
      spec.combining < 1) {
    throw std::invalid_argument("spatial-combining size must be at least 1");
  }
}

FrameOutcome Protocol::step(const FrameLinks& links, RelayNetwork& net,
                            CounterRng& rng) {
  switch (spec_.kind) {
    case ProtocolKind::kObdwf:
      return obdwf_step(std::get<ObdwfState>(state_), links, net, rng);
    case ProtocolKind::kDdf:
      return ddf_step(std::get<DecodeForwardState>(state_), links, net);
    case ProtocolKind::kDfsc:
      return dfsc_step(std::get<DecodeForwardState>(state_), links, net, spec_.combining);
    case ProtocolKind::kAf:
      return af_step(std::get<AmplifyForwardState>(state_), links, net);
    case ProtocolKind::kAfsc:
      return afsc_step(std::get<AmplifyForwardState>(state_), links, net, spec_.combining);
  }
  throw std::logic_error("unhandled protocol kind");
}

}  // namespace obdwf
