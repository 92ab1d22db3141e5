#include "obdwf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace obdwf {

double OrderParams::effective_gamma() const {
  return gamma > 0.0 ? gamma : std::pow(K, sigma);
}

void validate(const OrderParams& p) {
  if (!(p.K > 0.0) || !(p.q > 0.0) || p.M < 1 || !(p.W > 0.0) || !(p.alpha > 0.0) ||
      !(p.gamma >= 0.0)) {
    throw std::invalid_argument("order parameters must be positive");
  }
  if (p.q > 0.5) throw std::invalid_argument("q must not exceed 1/2");
  if (!(p.sigma > 0.0 && p.sigma <= 1.0)) throw std::invalid_argument("sigma must lie in (0, 1]");
}

std::function<double(double)> pgf_from_pmf(std::map<std::uint32_t, double> pmf) {
  double total = 0.0;
  for (const auto& [k, p] : pmf) {
    if (p < 0.0) throw std::invalid_argument("pmf entries must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("pmf must sum to 1");
  return [pmf = std::move(pmf)](double z) {
    double acc = 0.0;
    for (const auto& [k, p] : pmf) {
      acc += p * std::pow(z, static_cast<double>(k));
    }
    return acc;
  };
}

std::function<double(double)> geometric_service_pgf(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("geometric parameter must lie in (0, 1]");
  return [p](double z) { return p * z / (1.0 - (1.0 - p) * z); };
}

double zeta_order(double K, double gamma) { return std::max(1.0, gamma / K); }

ServiceOrder ddf_service_time_order(double K, double q, int M, double gamma) {
  ServiceOrder out;
  out.rho = std::max(1.0, gamma / K);
  const double qm = std::pow(q, M - 1);
  if (gamma / K < 1.0) {
    if (K / (q * gamma * gamma) >= 1.0) {
      out.regime = ServiceCase::kCase1;
      out.eta = std::max(1.0, std::pow(gamma * gamma / (K * qm), 1.0 / M));
    } else {
      out.regime = ServiceCase::kCase2;
      out.eta = gamma * gamma / K;
    }
  } else if (1.0 / (q * gamma) >= 1.0) {
    out.regime = ServiceCase::kCase3;
    out.eta = std::pow(gamma / qm, 1.0 / M);
  } else {
    out.regime = ServiceCase::kCase4;
    out.eta = gamma;
  }
  out.value = std::max(out.rho, out.eta);
  return out;
}

double obdwf_throughput_bound(double K, double W, double alpha) {
  return W * alpha / 4.0 * std::log2(K);
}

DdfThroughputOrder ddf_throughput_order(double K, double q, int M) {
  DdfThroughputOrder out;
  const double x = K * std::pow(q, M - 1);
  out.power_branch = std::pow(x, 1.0 / M);
  out.gamma_star = std::max(1.0, std::sqrt(x));
  out.value = out.power_branch;
  if (x > 1.0) {
    out.log_branch = std::log2(x);
    if (out.log_branch < out.power_branch) {
      out.value = out.log_branch;
      out.log_branch_selected = true;
    }
  }
  return out;
}

namespace {

[[noreturn]] void unstable(double load) {
  std::ostringstream msg;
  msg << "queue is unstable: load " << load << " >= 1";
  throw StabilityError(msg.str());
}

double batch_delay(double lambda_s, double lambda_s2, double b, double b2) {
  if (lambda_s == 0.0) return b;
  const double load = lambda_s * b;
  if (load >= 1.0) unstable(load);
  const double l2 = lambda_s * lambda_s;
  return (l2 * b2 - l2 * b - lambda_s * b + lambda_s2 * b) / (2.0 * lambda_s * (1.0 - load)) + b;
}

double one_sided_slope(const std::function<double(double)>& f, double h) {
  const auto d = [&](double step) { return (1.0 - f(1.0 - step)) / step; };
  const double d1 = d(h);
  const double d2 = d(h / 2.0);
  const double d4 = d(h / 4.0);
  return (4.0 * (2.0 * d4 - d2) - (2.0 * d2 - d1)) / 3.0;
}

}  // namespace

double mx_g1_wait(double lambda_s, double lambda_s2, const ServiceMoments& m) {
  if (lambda_s < 0.0 || lambda_s2 < lambda_s) {
    throw std::invalid_argument("batch moments must satisfy 0 <= lambda_s <= lambda_s2");
  }
  if (m.b < 0.0 || m.b2 < m.b * m.b * (1.0 - 1e-12)) {
    throw std::invalid_argument("service moments must satisfy b2 >= b^2 >= 0");
  }
  return batch_delay(lambda_s, lambda_s2, m.b, m.b2);
}

PgfMean pgf_mean_system(const PgfSpec& spec, double lambda_s) {
  if (!spec.arrivals || !spec.service) throw std::invalid_argument("p.g.f. evaluators missing");
  if (std::abs(spec.arrivals(1.0) - 1.0) > 1e-12 || std::abs(spec.service(1.0) - 1.0) > 1e-12) {
    throw std::invalid_argument("p.g.f. must equal 1 at z = 1");
  }
  if (!(lambda_s > 0.0)) throw std::invalid_argument("arrival rate must be positive");
  constexpr double h = 1e-4;
  PgfMean out;
  out.service_mean = one_sided_slope(spec.service, h);
  const double load = lambda_s * out.service_mean;
  if (load >= 1.0) unstable(load);

  const auto queue = [&](double z) {
    const double f = spec.service(spec.arrivals(z));
    return (1.0 - load) * (1.0 - z) * f / (f - z);
  };
  const auto d = [&](double step) { return (1.0 - queue(1.0 - step)) / step; };
  const double coarse = d(h);
  const double fine = d(h / 2.0);
  out.richardson_gap = std::abs(fine - coarse);
  out.mean_occupancy = 2.0 * fine - coarse;
  if (!std::isfinite(out.mean_occupancy) || out.richardson_gap > 1e-2 * std::abs(out.mean_occupancy) + 1e-6) {
    std::ostringstream msg;
    msg << "numerical derivative near z = 1 did not settle: D(h) = " << coarse
        << ", D(h/2) = " << fine;
    throw std::runtime_error(msg.str());
  }
  out.mean_delay = out.mean_occupancy / lambda_s;
  return out;
}

double obdwf_delay_order(const OrderParams& p, double lambda_s, double lambda_s2) {
  validate(p);
  const double gamma = p.effective_gamma();
  const double zeta = zeta_order(p.K, gamma);
  const double ds = ddf_service_time_order(p.K, p.q, p.M, gamma).value;
  if (lambda_s == 0.0) return ds;
  const double load = lambda_s * zeta;
  if (load >= 1.0) unstable(load);
  return std::max(lambda_s2 * zeta / (lambda_s * (1.0 - load)), ds);
}

double ddf_delay_order(const OrderParams& p, double lambda_s, double lambda_s2) {
  validate(p);
  const double ds = ddf_service_time_order(p.K, p.q, p.M, p.effective_gamma()).value;
  if (lambda_s == 0.0) return ds;
  const double load = lambda_s * ds;
  if (load >= 1.0) unstable(load);
  return lambda_s2 * ds / (lambda_s * (1.0 - load));
}

double stability_gain_order(const OrderParams& p) {
  validate(p);
  const double gamma = p.effective_gamma();
  return ddf_service_time_order(p.K, p.q, p.M, gamma).value / zeta_order(p.K, gamma);
}

SlopeFit linear_fit(std::span<const std::pair<double, double>> points) {
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("linear fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear fit needs distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - fit.intercept - fit.slope * x;
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.stderr_slope = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

SlopeFit loglog_order_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("order fit needs at least three points");
  std::vector<std::pair<double, double>> logs;
  logs.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw std::invalid_argument("order fit needs positive coordinates");
    }
    logs.emplace_back(std::log(x), std::log(y));
  }
  return linear_fit(logs);
}

}  // namespace obdwf
