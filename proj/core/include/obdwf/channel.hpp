#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "obdwf/geometry.hpp"
#include "obdwf/rng.hpp"

namespace obdwf {

/// Physical-layer constants. Noise power is normalized to 1, so `power` is
/// the linear transmit SNR.
struct PhyParams {
  double bandwidth_hz = 1e6;
  double power = 100.0;
  double xi = 1.0;
  double alpha = 4.0;
  double rate_bps = 0.0;
  double slot_s = 5e-3;

  /// beta = 2^(R / W), so that R = W log2(beta).
  double beta() const;
  /// gamma = beta^(2 / alpha).
  double gamma() const;
  /// Information bits carried by one transmission slot, R * tau.
  double bits_per_slot() const { return rate_bps * slot_s; }

  static PhyParams from_beta(double beta, double bandwidth_hz = 1e6,
                             double power = 100.0, double alpha = 4.0,
                             double xi = 1.0, double slot_s = 5e-3);
};

/// Throws std::invalid_argument on a non-physical parameter set.
void validate(const PhyParams& phy);

double db_to_linear(double db);

struct RayleighFading {};

/// Discrete power-gain distribution with unit mean.
struct TabulatedFading {
  std::vector<double> gains;
  std::vector<double> probabilities;
};

using FadingModel = std::variant<RayleighFading, TabulatedFading>;

/// Throws std::invalid_argument unless the table is a unit-mean pmf.
void validate(const FadingModel& model);

/// One power gain. Rayleigh draws are unit-mean exponential.
double draw_fading(const FadingModel& model, CounterRng& rng);

struct LinkDraw {
  double gain = 0.0;      // H
  double distance = 0.0;  // d
  double snr = 0.0;       // P xi H / d^alpha
  double rate_bps = 0.0;  // W log2(1 + snr)
};

/// Distances below this are clamped before evaluating path loss.
inline constexpr double kMinDistance = 1e-9;

/// Received SNR P xi H / d^alpha, with d clamped to kMinDistance.
double link_snr(double gain, double distance, const PhyParams& phy);

/// Rate W log2(1 + snr) for an already combined SNR.
double rate_from_snr(double snr, const PhyParams& phy);

/// Evaluates a link with the same arithmetic as link_rate.
LinkDraw make_link(double gain, double distance, const PhyParams& phy);

/// Achievable rate W log2(1 + P xi H / d^alpha). Throws std::domain_error
/// when d == 0 or H < 0.
double link_rate(double gain, double distance, const PhyParams& phy);

/// True iff link_rate(H, d) >= R.
bool is_connected(double gain, double distance, const PhyParams& phy);

/// Radius within which a link with power gain H is connected,
/// (P xi H / (beta - 1))^(1 / alpha).
double coverage_radius(double gain, const PhyParams& phy);

/// End-to-end amplify-and-forward SNR
///   P^2 S_sj S_jd / (P S_sj + P S_jd + 1)
/// where S = H / d^alpha on each hop.
double af_effective_snr(double s_source_relay, double s_relay_dest,
                        double power);

enum class Endpoint { kSource, kDestination };

struct ProbabilityEstimate {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t samples = 0;
};

/// Monte Carlo probability that a relay placed uniformly on the disk has a
/// connected link to the given endpoint, jointly sampling position and fading.
/// The interval is the normal-approximation 95% binomial interval.
ProbabilityEstimate connection_probability_mc(const PhyParams& phy,
                                              const FadingModel& fading,
                                              const DiskGeometry& geometry,
                                              Endpoint endpoint,
                                              std::uint64_t n_samples,
                                              std::uint64_t seed);

}  // namespace obdwf
