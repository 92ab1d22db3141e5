#include "queue_oracle.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

namespace obdwf::cli {

namespace {

template <typename Rng>
std::uint32_t draw_pmf(const std::vector<std::pair<std::uint32_t, double>>& cdf, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (const auto& [value, c] : cdf) {
    if (u < c) return value;
  }
  return cdf.back().first;
}

std::vector<std::pair<std::uint32_t, double>> cumulative(const std::map<std::uint32_t, double>& pmf) {
  std::vector<std::pair<std::uint32_t, double>> cdf;
  double acc = 0.0;
  for (const auto& [v, p] : pmf) {
    acc += p;
    cdf.emplace_back(v, acc);
  }
  return cdf;
}

}  // namespace

QueueOracleResult simulate_batch_queue(const std::map<std::uint32_t, double>& batch_pmf,
                                       const ServiceLaw& service, std::uint64_t frames,
                                       std::uint64_t seed) {
  if (batch_pmf.empty()) throw std::invalid_argument("empty batch pmf");
  if (service.geometric_p <= 0.0 && service.pmf.empty()) {
    throw std::invalid_argument("empty service law");
  }
  std::mt19937_64 rng(seed);
  const auto batch_cdf = cumulative(batch_pmf);
  const auto service_cdf = cumulative(service.pmf);
  std::geometric_distribution<std::uint32_t> geometric(
      service.geometric_p > 0.0 ? service.geometric_p : 0.5);

  QueueOracleResult out;
  out.frames = frames;
  std::uint64_t free_at = 0;
  long double delay_sum = 0.0L;
  for (std::uint64_t t = 0; t < frames; ++t) {
    const std::uint32_t batch = draw_pmf(batch_cdf, rng);
    for (std::uint32_t i = 0; i < batch; ++i) {
      const std::uint64_t x = service.geometric_p > 0.0 ? geometric(rng) + 1u
                                                        : draw_pmf(service_cdf, rng);
      const std::uint64_t start = std::max(t, free_at);
      free_at = start + x;
      delay_sum += static_cast<long double>(free_at - t);
      ++out.packets;
    }
  }
  out.mean_delay = out.packets ? static_cast<double>(delay_sum / out.packets) : 0.0;
  return out;
}

}  // namespace obdwf::cli
