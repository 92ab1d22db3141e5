#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "obdwf/rng.hpp"

namespace obdwf {

using PacketId = std::uint64_t;

/// Batch-size pmf for the per-frame source arrivals.
class ArrivalDistribution {
 public:
  /// Throws std::invalid_argument unless the map is a pmf over batch sizes.
  explicit ArrivalDistribution(std::map<std::uint32_t, double> pmf);

  static ArrivalDistribution bernoulli(double lambda);
  static ArrivalDistribution none();

  const std::map<std::uint32_t, double>& pmf() const { return pmf_; }

 private:
  std::map<std::uint32_t, double> pmf_;
  friend std::uint32_t sample_arrivals(const ArrivalDistribution&, CounterRng&);
};

struct ArrivalMoments {
  double mean = 0.0;         // lambda_s
  double second = 0.0;       // lambda_s^(2) = E[A^2]
};

std::uint32_t sample_arrivals(const ArrivalDistribution& dist, CounterRng& rng);
ArrivalMoments arrival_moments(const ArrivalDistribution& dist);

struct Packet {
  PacketId id = 0;
  double bits = 0.0;
  std::int64_t arrival_frame = 0;
  std::optional<std::int64_t> delivery_frame;
};

/// Capacity 0 means unbounded.
inline constexpr std::size_t kUnbounded = 0;

/// FIFO of packets at the source. Overflow drops the newest arrival.
class SourceQueue {
 public:
  explicit SourceQueue(std::size_t capacity = kUnbounded) : capacity_(capacity) {}

  bool enqueue(const Packet& packet);
  const Packet& head() const { return packets_.front(); }
  Packet pop();
  bool empty() const { return packets_.empty(); }
  std::size_t size() const { return packets_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t drops() const { return drops_; }

 private:
  std::deque<Packet> packets_;
  std::size_t capacity_;
  std::uint64_t drops_ = 0;
};

/// FIFO of packet ids buffered at one relay.
class RelayQueue {
 public:
  explicit RelayQueue(std::size_t capacity = kUnbounded) : capacity_(capacity) {}

  /// Appends unless full or already present; a rejected id bumps drops()
  /// only when the queue is full.
  bool enqueue(PacketId id);
  PacketId head() const { return ids_.front(); }
  bool contains(PacketId id) const;
  /// Order-preserving removal; returns whether the id was present.
  bool remove(PacketId id);
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t drops() const { return drops_; }
  const std::deque<PacketId>& ids() const { return ids_; }

 private:
  std::deque<PacketId> ids_;
  std::size_t capacity_;
  std::uint64_t drops_ = 0;
  // True while ids were enqueued in increasing order; lookups then bisect.
  bool sorted_ = true;
};

/// Removes `id` from every relay queue holding it. Returns the number of
/// queues it was removed from.
std::size_t dequeue_id(std::span<RelayQueue> relays, PacketId id);

}  // namespace obdwf
