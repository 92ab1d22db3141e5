#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "obdwf/channel.hpp"
#include "obdwf/rng.hpp"
#include "obdwf/traffic.hpp"

namespace obdwf {

enum class ProtocolKind { kObdwf, kDdf, kAf, kAfsc, kDfsc };

/// Protocol plus its combining size (N_A for AF-SC, N_D for DF-SC).
struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::kObdwf;
  int combining = 1;

  friend bool operator==(const ProtocolSpec&, const ProtocolSpec&) = default;
};

std::string_view to_string(ProtocolKind kind);
/// "obdwf", "dfsc:5", ...; the suffix is only written for AF-SC / DF-SC.
std::string to_string(const ProtocolSpec& spec);
/// Parses "name" or "name:N". Throws std::invalid_argument.
ProtocolSpec parse_protocol_spec(std::string_view text, int default_combining = 5);
/// Accepts obdwf, ddf, af, afsc, dfsc (case-insensitive). Throws
/// std::invalid_argument otherwise.
ProtocolKind parse_protocol_kind(std::string_view name);

/// The channel realization of one frame.
///
/// In sampled mode every link gain is a pure function of
/// (seed, frame, link index), computed the first time a protocol asks for it,
/// so protocols that inspect different subsets of links see consistent
/// values. Fixed mode serves gains supplied by the caller.
class FrameLinks {
 public:
  FrameLinks(const PhyParams& phy, const FadingModel& fading,
             std::uint64_t seed, std::size_t relay_count,
             bool direct_link_enabled = true);

  /// Explicit (H, d) pairs per relay. A missing direct draw disables the
  /// direct source-destination link.
  static FrameLinks fixed(const PhyParams& phy,
                          std::vector<std::pair<double, double>> source_side,
                          std::vector<std::pair<double, double>> dest_side,
                          std::optional<std::pair<double, double>> direct = {});

  /// Invalidates cached draws and moves to frame `frame`.
  void begin_frame(std::int64_t frame);
  void set_relay_distances(std::size_t relay, double to_source, double to_dest);
  void set_direct_distance(double d);

  std::size_t relay_count() const { return src_distance_.size(); }
  std::int64_t frame() const { return frame_; }
  const PhyParams& phy() const { return phy_; }

  const LinkDraw& source_side(std::size_t relay) const;
  const LinkDraw& dest_side(std::size_t relay) const;
  const LinkDraw& direct() const;
  bool direct_enabled() const { return direct_enabled_; }

  bool source_connected(std::size_t relay) const;
  bool dest_connected(std::size_t relay) const;
  bool direct_connected() const;

  /// S = H / d^alpha on each hop.
  double source_strength(std::size_t relay) const;
  double dest_strength(std::size_t relay) const;

 private:
  const LinkDraw& draw(std::uint32_t link_index, double distance,
                       double path_loss, std::vector<LinkDraw>& cache,
                       std::vector<char>& ready, std::size_t slot) const;

  PhyParams phy_;
  FadingModel fading_;
  std::uint64_t seed_ = 0;
  bool sampled_ = true;
  bool direct_enabled_ = true;
  std::int64_t frame_ = 0;

  std::vector<double> src_distance_, dst_distance_;
  std::vector<double> src_path_loss_, dst_path_loss_;
  double direct_distance_ = 1.0;
  double direct_path_loss_ = 1.0;

  mutable std::vector<LinkDraw> src_cache_, dst_cache_, direct_cache_;
  mutable std::vector<char> src_ready_, dst_ready_, direct_ready_;

  std::vector<double> fixed_src_gain_, fixed_dst_gain_;
  double fixed_direct_gain_ = 0.0;
};

/// Buffers of the source and the K relays.
struct RelayNetwork {
  SourceQueue source;
  std::vector<RelayQueue> relays;

  RelayNetwork() = default;
  RelayNetwork(std::size_t relay_count, std::size_t capacity);
};

enum class FrameRole { kIdle, kBroadcast, kRelayForward };

std::string_view to_string(FrameRole role);

struct DecodeEvent {
  std::uint32_t relay = 0;
  PacketId id = 0;

  friend bool operator==(const DecodeEvent&, const DecodeEvent&) = default;
};

/// Frames spent by one completed packet in the source-to-relays stage (rho)
/// and the relays-to-destination stage (eta).
struct ServiceSample {
  std::int64_t rho = 0;
  std::int64_t eta = 0;
  std::int64_t total() const { return rho + eta; }
};

struct FrameOutcome {
  FrameRole role = FrameRole::kIdle;
  std::optional<PacketId> delivered;
  bool source_dequeued = false;
  bool direct_delivery = false;
  std::size_t copies_removed = 0;  // relay-queue entries dropped on delivery
  std::vector<DecodeEvent> decodes;
  std::optional<ServiceSample> service;
};

/// Uniform choice among the contending relays. Throws std::invalid_argument
/// on an empty set.
std::uint32_t contention_select(std::span<const std::uint32_t> contenders,
                                CounterRng& rng);

struct ObdwfState {};

/// State shared by the decode-and-forward baselines (DDF, DF-SC).
struct DecodeForwardState {
  enum class Phase { kBroadcast, kForward };
  Phase phase = Phase::kBroadcast;
  std::vector<std::uint32_t> holders;
  std::vector<char> holds;  // indexed by relay
  std::int64_t rho = 0;
  std::int64_t eta = 0;
};

/// State shared by the amplify-and-forward baselines (AF, AF-SC).
struct AmplifyForwardState {
  enum class Phase { kListen, kForward };
  Phase phase = Phase::kListen;
  std::vector<double> listen_strength;  // S_sj captured in the listen frame
  std::int64_t rho = 0;
  std::int64_t eta = 0;
};

/// Relays with a non-empty buffer and a connected destination link contend;
/// the winner forwards its head-of-line packet and every copy is dropped.
/// Without contenders the source broadcasts its head packet and dequeues it
/// once a relay buffers it or the destination decodes it.
FrameOutcome obdwf_step(ObdwfState& state, const FrameLinks& links,
                        RelayNetwork& net, CounterRng& rng);

/// Conventional DDF: broadcast until a relay or the destination decodes,
/// then a holder forwards once it is connected. The source keeps the packet
/// until delivery.
FrameOutcome ddf_step(DecodeForwardState& state, const FrameLinks& links,
                      RelayNetwork& net);

/// DF with spatial combining: broadcast until at least n_d relays hold the
/// packet, then all holders forward together each frame.
FrameOutcome dfsc_step(DecodeForwardState& state, const FrameLinks& links,
                       RelayNetwork& net, int n_d);

/// Conventional AF: listen frame, then the best effective-SNR relay forwards.
FrameOutcome af_step(AmplifyForwardState& state, const FrameLinks& links,
                     RelayNetwork& net);

/// AF with spatial combining over the n_a best relays.
FrameOutcome afsc_step(AmplifyForwardState& state, const FrameLinks& links,
                       RelayNetwork& net, int n_a);

/// Type-erased protocol driver used by the engine.
class Protocol {
 public:
  explicit Protocol(ProtocolSpec spec);

  const ProtocolSpec& spec() const { return spec_; }
  FrameOutcome step(const FrameLinks& links, RelayNetwork& net,
                    CounterRng& rng);

 private:
  ProtocolSpec spec_;
  std::variant<ObdwfState, DecodeForwardState, AmplifyForwardState> state_;
};

}  // namespace obdwf
