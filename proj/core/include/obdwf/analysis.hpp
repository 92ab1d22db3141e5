#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace obdwf {

/// Raised when a queueing formula is evaluated at or beyond its stability
/// boundary.
class StabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct OrderParams {
  double K = 110.0;
  double q = 0.2;
  int M = 5;
  double gamma = 0.0;  // 0 derives K^sigma
  double W = 1e6;
  double alpha = 4.0;
  double sigma = 0.5;

  double effective_gamma() const;
};

/// Throws std::invalid_argument on a non-positive field, q > 1/2 or sigma
/// outside (0, 1].
void validate(const OrderParams& params);

struct ServiceMoments {
  double b = 1.0;
  double b2 = 1.0;
};

/// Probability generating functions of the per-frame arrival batch and of the
/// service time (in frames).
struct PgfSpec {
  std::function<double(double)> arrivals;
  std::function<double(double)> service;
};

std::function<double(double)> pgf_from_pmf(std::map<std::uint32_t, double> pmf);
/// Service time X >= 1 with Pr{X = n} = p (1-p)^(n-1).
std::function<double(double)> geometric_service_pgf(double p);

/// All order calculators use multiplicative constant 1.
double zeta_order(double K, double gamma);

enum class ServiceCase { kCase1 = 1, kCase2, kCase3, kCase4 };

struct ServiceOrder {
  double rho = 1.0;
  double eta = 1.0;
  double value = 1.0;  // max(rho, eta)
  ServiceCase regime = ServiceCase::kCase1;
};

ServiceOrder ddf_service_time_order(double K, double q, int M, double gamma);

double obdwf_throughput_bound(double K, double W, double alpha);

struct DdfThroughputOrder {
  double value = 0.0;
  double power_branch = 0.0;
  double log_branch = 0.0;  // only meaningful when K q^(M-1) > 1
  bool log_branch_selected = false;
  double gamma_star = 1.0;
};

DdfThroughputOrder ddf_throughput_order(double K, double q, int M);

/// Mean frames in system for batch arrivals of mean lambda_s and second
/// moment lambda_s2 served FIFO one packet at a time. Throws StabilityError
/// when lambda_s * b >= 1; returns b when lambda_s == 0.
double mx_g1_wait(double lambda_s, double lambda_s2, const ServiceMoments& moments);

struct PgfMean {
  double mean_occupancy = 0.0;
  double mean_delay = 0.0;
  double service_mean = 0.0;
  double richardson_gap = 0.0;  // |D(h/2) - D(h)| before extrapolation
};

/// Mean occupancy from the derivative at 1 of the stationary queue p.g.f.,
/// with the mean delay following by Little's law.
PgfMean pgf_mean_system(const PgfSpec& spec, double lambda_s);

double obdwf_delay_order(const OrderParams& params, double lambda_s, double lambda_s2);
double ddf_delay_order(const OrderParams& params, double lambda_s, double lambda_s2);
double stability_gain_order(const OrderParams& params);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r2 = 1.0;
};

/// Ordinary least squares y = intercept + slope x. Needs >= 2 points.
SlopeFit linear_fit(std::span<const std::pair<double, double>> points);

/// Least squares on (log x, log y). Needs >= 3 points with positive
/// coordinates; throws std::invalid_argument otherwise.
SlopeFit loglog_order_fit(std::span<const std::pair<double, double>> points);

}  // namespace obdwf
