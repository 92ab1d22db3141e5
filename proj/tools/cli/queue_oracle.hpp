#pragma once

#include <cstdint>
#include <map>

namespace obdwf::cli {

/// Service-time law in frames: a finite pmf, or geometric with success
/// probability geometric_p when that is positive.
struct ServiceLaw {
  std::map<std::uint32_t, double> pmf;
  double geometric_p = 0.0;
};

struct QueueOracleResult {
  double mean_delay = 0.0;   // frames in system, arrival frame counted
  std::uint64_t packets = 0;
  std::uint64_t frames = 0;
};

/// Brute-force single-server FIFO queue fed by i.i.d. per-frame batches.
/// A packet arriving in frame t may start service in frame t; a packet whose
/// service of X frames starts in frame s leaves at the end of frame s+X-1.
QueueOracleResult simulate_batch_queue(const std::map<std::uint32_t, double>& batch_pmf,
                                       const ServiceLaw& service, std::uint64_t frames,
                                       std::uint64_t seed);

}  // namespace obdwf::cli
