#include "obdwf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace obdwf {

double PhyParams::beta() const { return std::exp2(rate_bps / bandwidth_hz); }

double PhyParams::gamma() const { return std::pow(beta(), 2.0 / alpha); }

PhyParams PhyParams::from_beta(double beta, double bandwidth_hz, double power,
                               double alpha, double xi, double slot_s) {
  PhyParams phy;
  phy.bandwidth_hz = bandwidth_hz;
  phy.power = power;
  phy.alpha = alpha;
  phy.xi = xi;
  phy.slot_s = slot_s;
  phy.rate_bps = bandwidth_hz * std::log2(beta);
  return phy;
}

void validate(const PhyParams& phy) {
  if (!(phy.bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (!(phy.power > 0.0)) throw std::invalid_argument("power must be positive");
  if (!(phy.xi > 0.0 && phy.xi <= 1.0)) throw std::invalid_argument("xi must lie in (0, 1]");
  if (!(phy.alpha > 2.0)) throw std::invalid_argument("path-loss exponent must exceed 2");
  if (!(phy.rate_bps > 0.0)) throw std::invalid_argument("rate must be positive (beta > 1)");
  if (!(phy.slot_s > 0.0)) throw std::invalid_argument("slot duration must be positive");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void validate(const FadingModel& model) {
  const auto* table = std::get_if<TabulatedFading>(&model);
  if (table == nullptr) {
    return;
  }
  if (table->gains.empty() || table->gains.size() != table->probabilities.size()) {
    throw std::invalid_argument("fading table needs matching gain/probability lists");
  }
  double total = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < table->gains.size(); ++i) {
    if (table->gains[i] < 0.0 || table->probabilities[i] < 0.0) {
      throw std::invalid_argument("fading table entries must be nonnegative");
    }
    total += table->probabilities[i];
    mean += table->gains[i] * table->probabilities[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("fading table probabilities must sum to 1");
  }
  if (std::abs(mean - 1.0) > 1e-9) {
    throw std::invalid_argument("fading table must have unit mean gain");
  }
}

double draw_fading(const FadingModel& model, CounterRng& rng) {
  if (std::holds_alternative<RayleighFading>(model)) {
    return -std::log(uniform01_open_low(rng));
  }
  const auto& table = std::get<TabulatedFading>(model);
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < table.gains.size(); ++i) {
    acc += table.probabilities[i];
    if (u < acc) {
      return table.gains[i];
    }
  }
  return table.gains.back();
}

double link_snr(double gain, double distance, const PhyParams& phy) {
  const double d = std::max(distance, kMinDistance);
  return phy.power * phy.xi * gain / std::pow(d, phy.alpha);
}

double rate_from_snr(double snr, const PhyParams& phy) {
  return phy.bandwidth_hz * std::log2(1.0 + snr);
}

LinkDraw make_link(double gain, double distance, const PhyParams& phy) {
  LinkDraw link;
  link.gain = gain;
  link.distance = distance;
  link.snr = link_snr(gain, distance, phy);
  link.rate_bps = rate_from_snr(link.snr, phy);
  return link;
}

double link_rate(double gain, double distance, const PhyParams& phy) {
  if (gain < 0.0) {
    throw std::domain_error("fading gain must be nonnegative");
  }
  if (!(distance > 0.0)) {
    throw std::domain_error("link distance must be positive");
  }
  return rate_from_snr(link_snr(gain, distance, phy), phy);
}

bool is_connected(double gain, double distance, const PhyParams& phy) {
  return link_rate(gain, distance, phy) >= phy.rate_bps;
}

double coverage_radius(double gain, const PhyParams& phy) {
  return std::pow(phy.power * phy.xi * gain / (phy.beta() - 1.0), 1.0 / phy.alpha);
}

double af_effective_snr(double s_source_relay, double s_relay_dest,
                        double power) {
  const double a = power * s_source_relay;
  const double b = power * s_relay_dest;
  return a * b / (a + b + 1.0);
}

ProbabilityEstimate connection_probability_mc(const PhyParams& phy,
                                              const FadingModel& fading,
                                              const DiskGeometry& geometry,
                                              Endpoint endpoint,
                                              std::uint64_t n_samples,
                                              std::uint64_t seed) {
  if (n_samples == 0) {
    throw std::invalid_argument("need at least one sample");
  }
  const Point& anchor = endpoint == Endpoint::kSource ? geometry.source()
                                                      : geometry.destination();
  CounterRng rng(seed, Stream::kSampling);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const Point p = sample_uniform_disk(geometry, rng).point;
    const double h = draw_fading(fading, rng);
    const double d = std::max(distance(p, anchor), kMinDistance);
    if (is_connected(h, d, phy)) {
      ++hits;
    }
  }
  ProbabilityEstimate est;
  est.samples = n_samples;
  est.value = static_cast<double>(hits) / static_cast<double>(n_samples);
  const double half =
      1.96 * std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n_samples));
  est.ci_low = std::max(0.0, est.value - half);
  est.ci_high = std::min(1.0, est.value + half);
  return est;
}

}  // namespace obdwf
