#include "obdwf/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace obdwf {

ArrivalDistribution::ArrivalDistribution(std::map<std::uint32_t, double> pmf)
    : pmf_(std::move(pmf)) {
  if (pmf_.empty()) {
    throw std::invalid_argument("arrival pmf is empty");
  }
  double total = 0.0;
  for (const auto& [batch, p] : pmf_) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("arrival probabilities must be nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("arrival probabilities must sum to 1");
  }
}

ArrivalDistribution ArrivalDistribution::bernoulli(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("Bernoulli arrival rate must lie in [0, 1]");
  }
  return ArrivalDistribution({{0u, 1.0 - lambda}, {1u, lambda}});
}

ArrivalDistribution ArrivalDistribution::none() {
  return ArrivalDistribution({{0u, 1.0}});
}

std::uint32_t sample_arrivals(const ArrivalDistribution& dist, CounterRng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  std::uint32_t last = 0;
  for (const auto& [batch, p] : dist.pmf_) {
    acc += p;
    last = batch;
    if (u < acc) {
      return batch;
    }
  }
  return last;
}

ArrivalMoments arrival_moments(const ArrivalDistribution& dist) {
  ArrivalMoments m;
  for (const auto& [batch, p] : dist.pmf()) {
    const double a = static_cast<double>(batch);
    m.mean += p * a;
    m.second += p * a * a;
  }
  return m;
}

bool SourceQueue::enqueue(const Packet& packet) {
  if (capacity_ != kUnbounded && packets_.size() >= capacity_) {
    ++drops_;
    return false;
  }
  packets_.push_back(packet);
  return true;
}

Packet SourceQueue::pop() {
  if (packets_.empty()) {
    throw std::logic_error("pop from empty source queue");
  }
  Packet p = packets_.front();
  packets_.pop_front();
  return p;
}

bool RelayQueue::enqueue(PacketId id) {
  if (contains(id)) {
    return false;
  }
  if (capacity_ != kUnbounded && ids_.size() >= capacity_) {
    ++drops_;
    return false;
  }
  if (!ids_.empty() && id < ids_.back()) {
    sorted_ = false;
  }
  ids_.push_back(id);
  return true;
}

bool RelayQueue::contains(PacketId id) const {
  if (sorted_) {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }
  return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

bool RelayQueue::remove(PacketId id) {
  auto it = sorted_ ? std::lower_bound(ids_.begin(), ids_.end(), id)
                    : std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    return false;
  }
  ids_.erase(it);
  if (ids_.empty()) {
    sorted_ = true;
  }
  return true;
}

std::size_t dequeue_id(std::span<RelayQueue> relays, PacketId id) {
  std::size_t removed = 0;
  for (auto& q : relays) {
    if (q.remove(id)) {
      ++removed;
    }
  }
  return removed;
}

}  // namespace obdwf
