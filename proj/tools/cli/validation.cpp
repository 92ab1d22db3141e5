#include "validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "obdwf/channel.hpp"
#include "obdwf/engine.hpp"
#include "queue_oracle.hpp"
#include "results.hpp"

namespace obdwf::cli {

namespace {

struct Sizes {
  std::uint64_t oracle_frames;
  std::uint64_t mc_samples;
  std::int64_t throughput_horizon;
  std::int64_t rate_horizon;
  double rate_resolution;
  std::int64_t stable_horizon;
  std::int64_t grid_horizon;
  std::int64_t hygiene_horizon;
};

Sizes sizes_for(Scale scale) {
  if (scale == Scale::kQuick) {
    return {10'000'000, 200'000, 20'000, 20'000, 0.04, 50'000, 50'000, 10'000};
  }
  return {10'000'000, 1'000'000, 100'000, 225'000, 0.01, 225'000, 200'000, 225'000};
}

// Invariant counters summed over every run in the suite.
struct RunLedger {
  std::uint64_t runs = 0;
  std::uint64_t conservation_checks = 0;
  std::uint64_t conservation_violations = 0;
  std::uint64_t lindley_violations = 0;
  std::uint64_t stale_copy_violations = 0;
  std::uint64_t dominance_runs = 0;

  void record(const RunMetrics& m) {
    ++runs;
    conservation_checks += m.conservation_checks;
    conservation_violations += m.conservation_violations;
    lindley_violations += m.lindley_violations;
    stale_copy_violations += m.stale_copy_violations;
    dominance_runs += m.dominance_violations > 0 ? 1 : 0;
  }

  RunMetrics run(const SimConfig& c) {
    RunMetrics m = obdwf::run(c);
    record(m);
    return m;
  }

  StableRateBracket stable_rate(const SimConfig& c, double lo, double hi, double res) {
    return max_stable_rate(c, lo, hi, res,
                           [this](double, const RunMetrics& m) { record(m); });
  }
};

std::string fmt(double v) { return format_number(v); }

SimConfig preset(int relays) {
  SimConfig c;
  c.relays = relays;
  apply_rate_rule(c);
  return c;
}

const std::map<std::uint32_t, double> kBurst = {{0, 0.999}, {15, 0.001}};

// ---------------------------------------------------------------------------

struct QueueCase {
  std::string label;
  std::map<std::uint32_t, double> batch;
  ServiceLaw service;
};

ServiceMoments moments_of(const ServiceLaw& law) {
  if (law.geometric_p > 0.0) {
    const double p = law.geometric_p;
    return {1.0 / p, (2.0 - p) / (p * p)};
  }
  ServiceMoments m{0.0, 0.0};
  for (const auto& [x, p] : law.pmf) {
    m.b += p * x;
    m.b2 += p * x * x;
  }
  return m;
}

CheckResult check_queue_formula(const ValidationOptions& opt, const Sizes& sz) {
  CheckResult r{1, "batch-arrival delay formula vs queue oracle and p.g.f.", true, "", 0, {}};
  const std::vector<QueueCase> cases = {
      {"burst15-geometric", kBurst, {{}, 0.5}},
      {"burst15-det2", kBurst, {{{2, 1.0}}, 0.0}},
      {"bern0.3-det1", {{0, 0.7}, {1, 0.3}}, {{{1, 1.0}}, 0.0}},
      {"bern0.4-unif12", {{0, 0.6}, {1, 0.4}}, {{{1, 0.5}, {2, 0.5}}, 0.0}},
      {"batch013-svc12", {{0, 0.8}, {1, 0.1}, {3, 0.1}}, {{{1, 0.7}, {2, 0.3}}, 0.0}},
      {"bern0.2-svc14", {{0, 0.8}, {1, 0.2}}, {{{1, 0.6}, {4, 0.4}}, 0.0}},
  };
  double worst_oracle = 0.0;
  double worst_pgf = 0.0;
  std::uint64_t seed = opt.seed;
  for (const auto& qc : cases) {
    const auto am = arrival_moments(ArrivalDistribution(qc.batch));
    const ServiceMoments sm = moments_of(qc.service);
    const double formula = opt.wait_formula(am.mean, am.second, sm);
    const auto oracle = simulate_batch_queue(qc.batch, qc.service, sz.oracle_frames, seed++);
    PgfSpec spec{pgf_from_pmf(qc.batch), qc.service.geometric_p > 0.0
                                             ? geometric_service_pgf(qc.service.geometric_p)
                                             : pgf_from_pmf(qc.service.pmf)};
    const double pgf = pgf_mean_system(spec, am.mean).mean_delay;
    const double e_oracle = std::abs(oracle.mean_delay - formula) / formula;
    const double e_pgf = std::abs(pgf - formula) / formula;
    worst_oracle = std::max(worst_oracle, e_oracle);
    if (qc.service.geometric_p == 0.0) worst_pgf = std::max(worst_pgf, e_pgf);
    r.measurements.emplace_back(qc.label + ":formula", formula);
    r.measurements.emplace_back(qc.label + ":oracle", oracle.mean_delay);
    r.measurements.emplace_back(qc.label + ":pgf", pgf);
  }
  r.measurements.emplace_back("worst_rel_err_oracle", worst_oracle);
  r.measurements.emplace_back("worst_rel_err_pgf", worst_pgf);
  r.passed = worst_oracle <= 0.02 && worst_pgf <= 1e-6;
  r.detail = std::to_string(cases.size()) + " cases; worst |oracle-formula|/formula = " +
             fmt(worst_oracle) + " (tol 0.02), worst finite-support |pgf-formula|/formula = " +
             fmt(worst_pgf) + " (tol 1e-6)";
  return r;
}

CheckResult check_connection_slope(const ValidationOptions& opt, const Sizes& sz) {
  CheckResult r{2, "connection probability falls as 1/gamma", true, "", 0, {}};
  const DiskGeometry geometry(2.5, 5);
  const double g0 = std::sqrt(110.0);
  std::string detail;
  for (Endpoint e : {Endpoint::kSource, Endpoint::kDestination}) {
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i <= 5; ++i) {
      const double gamma = g0 * std::pow(10.0, i / 5.0);
      const PhyParams phy = PhyParams::from_beta(gamma * gamma);
      const auto est =
          connection_probability_mc(phy, RayleighFading{}, geometry, e, sz.mc_samples,
                                    opt.seed + static_cast<std::uint64_t>(i));
      points.emplace_back(gamma, est.value);
    }
    const SlopeFit fit = loglog_order_fit(points);
    const std::string side = e == Endpoint::kSource ? "source" : "destination";
    r.measurements.emplace_back(side + ":slope", fit.slope);
    r.measurements.emplace_back(side + ":stderr", fit.stderr_slope);
    r.passed = r.passed && std::abs(fit.slope + 1.0) <= 0.1;
    detail += side + " slope " + fmt(fit.slope) + " +- " + fmt(fit.stderr_slope) + "; ";
  }
  r.detail = detail + "gamma over [" + fmt(g0) + ", " + fmt(10 * g0) + "], target -1 +- 0.1";
  return r;
}

CheckResult check_throughput_trend(const ValidationOptions& opt, const Sizes& sz, RunLedger& ledger) {
  CheckResult r{3, "OBDWF throughput grows as log2 K under its bound", true, "", 0, {}};
  std::vector<std::pair<double, double>> points;
  bool monotone = true;
  bool bounded = true;
  double prev = -1.0;
  for (int k : {32, 64, 128, 256}) {
    SimConfig c = preset(k);
    c.infinite_backlog = true;
    c.horizon = sz.throughput_horizon;
    c.seed = opt.seed;
    const RunMetrics m = ledger.run(c);
    const double bound = obdwf_throughput_bound(k, c.phy.bandwidth_hz, c.phy.alpha);
    monotone = monotone && m.throughput_bps > prev;
    bounded = bounded && m.throughput_bps <= bound;
    prev = m.throughput_bps;
    points.emplace_back(std::log2(k), m.throughput_bps);
    r.measurements.emplace_back("K=" + std::to_string(k) + ":throughput_bps", m.throughput_bps);
    r.measurements.emplace_back("K=" + std::to_string(k) + ":bound_bps", bound);
  }
  const SlopeFit fit = linear_fit(points);
  r.measurements.emplace_back("fit_slope_bps_per_log2K", fit.slope);
  r.measurements.emplace_back("fit_r2", fit.r2);
  r.passed = monotone && bounded && fit.r2 >= 0.95;
  r.detail = std::string("monotone=") + (monotone ? "yes" : "no") +
             ", below bound=" + (bounded ? "yes" : "no") + ", fit " + fmt(fit.slope) +
             " * log2 K + " + fmt(fit.intercept) + " with R^2 = " + fmt(fit.r2) + " (need >= 0.95)";
  return r;
}

CheckResult check_mobility_insensitivity(const ValidationOptions& opt, const Sizes& sz,
                                         RunLedger& ledger) {
  CheckResult r{4, "OBDWF insensitive to q, DDF sensitive", true, "", 0, {}};
  std::map<std::string, double> spread;
  for (const char* name : {"obdwf", "ddf"}) {
    std::vector<double> values;
    for (double q : {0.1, 0.2, 0.5}) {
      SimConfig c = preset(110);
      c.mobility = RandomWalk{q};
      c.protocol = parse_protocol_spec(name);
      c.infinite_backlog = true;
      c.horizon = sz.throughput_horizon;
      c.seed = opt.seed;
      const RunMetrics m = ledger.run(c);
      values.push_back(m.throughput_bps);
      r.measurements.emplace_back(std::string(name) + ":q=" + fmt(q), m.throughput_bps);
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    spread[name] = (*hi - *lo) / *hi;
    r.measurements.emplace_back(std::string(name) + ":relative_spread", spread[name]);
  }
  r.passed = spread["obdwf"] < 0.10 && spread["ddf"] > 0.25;
  r.detail = "relative spread (max-min)/max over q in {0.1, 0.2, 0.5}: OBDWF " +
             fmt(spread["obdwf"]) + " (need < 0.10), DDF " + fmt(spread["ddf"]) + " (need > 0.25)";
  return r;
}

CheckResult check_protocol_ordering(const ValidationOptions& opt, const Sizes& sz,
                                    RunLedger& ledger) {
  CheckResult r{5, "OBDWF beats DDF and AF variants in throughput and stable rate", true, "", 0, {}};
  const std::vector<std::string> protocols = {"obdwf", "ddf", "af", "afsc:5", "dfsc:5"};
  const std::vector<std::string> rivals = {"ddf", "af", "afsc:5"};
  std::ostringstream detail;
  for (int k : {60, 110, 160}) {
    std::map<std::string, double> thr;
    std::map<std::string, StableRateBracket> rate;
    for (const auto& p : protocols) {
      SimConfig c = preset(k);
      c.protocol = parse_protocol_spec(p);
      c.seed = opt.seed;
      c.horizon = sz.throughput_horizon;
      c.infinite_backlog = true;
      thr[p] = ledger.run(c).throughput_bps;
      c.infinite_backlog = false;
      c.horizon = sz.rate_horizon;
      rate[p] = ledger.stable_rate(c, 0.001, 0.601, sz.rate_resolution);
      const std::string tag = "K=" + std::to_string(k) + ":" + p;
      r.measurements.emplace_back(tag + ":throughput_bps", thr[p]);
      r.measurements.emplace_back(tag + ":lambda_stable", rate[p].lambda_stable);
      r.measurements.emplace_back(tag + ":lambda_unstable", rate[p].lambda_unstable);
    }
    for (const auto& rival : rivals) {
      const bool t_ok = thr["obdwf"] > thr[rival];
      const bool l_ok = rate["obdwf"].lambda_stable >= rate[rival].lambda_unstable;
      if (!t_ok || !l_ok) {
        r.passed = false;
        detail << "K=" << k << " obdwf vs " << rival << ": throughput " << (t_ok ? "ok" : "FAIL")
               << ", lambda* " << (l_ok ? "ok" : "FAIL") << "; ";
      }
    }
    detail << "K=" << k << " lambda* obdwf [" << fmt(rate["obdwf"].lambda_stable) << ", "
           << fmt(rate["obdwf"].lambda_unstable) << "] ddf [" << fmt(rate["ddf"].lambda_stable)
           << ", " << fmt(rate["ddf"].lambda_unstable) << "]; ";
  }

  SimConfig c = preset(110);
  c.arrivals = ArrivalDistribution(kBurst);
  c.horizon = sz.stable_horizon;
  c.seed = opt.seed;
  const RunMetrics m = ledger.run(c);
  const bool bursty_ok = m.stable() && m.delivered > 0 && std::isfinite(m.delay_mean_frames);
  r.measurements.emplace_back("bursty:delay_mean_frames", m.delay_mean_frames);
  r.measurements.emplace_back("bursty:stable", m.stable() ? 1.0 : 0.0);
  r.passed = r.passed && bursty_ok;
  detail << "bursty lambda_s=0.015 OBDWF delay " << fmt(m.delay_mean_frames) << " frames, "
         << (m.stable() ? "stable" : "UNSTABLE");
  r.detail = detail.str();
  return r;
}

CheckResult check_alternation(const ValidationOptions& opt, const Sizes& sz, RunLedger& ledger) {
  CheckResult r{6, "OBDWF alternates broadcast and forward frames", true, "", 0, {}};
  SimConfig c;
  c.relays = 1;
  c.gamma_exponent.reset();
  c.phy = PhyParams::from_beta(1.1);
  c.fading = TabulatedFading{{1.0}, {1.0}};
  c.direct_link = false;
  c.infinite_backlog = true;
  c.horizon = 10'000;
  c.warmup = 1'000;
  c.seed = opt.seed;
  const RunMetrics single = ledger.run(c);
  const double half_rate = c.phy.rate_bps / 2.0;
  const bool exact = single.delivered * 2 == static_cast<std::uint64_t>(single.frames) &&
                     std::abs(single.throughput_bps - half_rate) <= 1e-12 * half_rate;
  r.measurements.emplace_back("single:throughput_bps", single.throughput_bps);
  r.measurements.emplace_back("single:half_rate_bps", half_rate);

  c.infinite_backlog = false;
  c.horizon = sz.rate_horizon;
  c.warmup = -1;
  const StableRateBracket b = ledger.stable_rate(c, 0.05, 0.95, 0.02);
  const bool bracket_ok = b.lambda_stable <= 0.5 && 0.5 <= b.lambda_unstable;
  r.measurements.emplace_back("single:lambda_stable", b.lambda_stable);
  r.measurements.emplace_back("single:lambda_unstable", b.lambda_unstable);

  SimConfig big = preset(256);
  big.infinite_backlog = true;
  big.track_connectivity = true;
  big.horizon = sz.throughput_horizon;
  big.seed = opt.seed;
  const RunMetrics m = ledger.run(big);
  const bool connected = m.both_connectivity > 0.999;
  const bool fraction_ok = std::abs(m.broadcast_fraction - 0.5) <= 0.01;
  r.measurements.emplace_back("K=256:both_connectivity", m.both_connectivity);
  r.measurements.emplace_back("K=256:broadcast_fraction", m.broadcast_fraction);

  r.passed = exact && bracket_ok && connected && fraction_ok;
  r.detail = "single relay throughput " + fmt(single.throughput_bps) + " vs R/2 " + fmt(half_rate) +
             (exact ? " (exact)" : " (MISMATCH)") + "; lambda* bracket [" + fmt(b.lambda_stable) +
             ", " + fmt(b.lambda_unstable) + "]" + (bracket_ok ? "" : " excludes 0.5") +
             "; K=256 connectivity " + fmt(m.both_connectivity) + ", broadcast fraction " +
             fmt(m.broadcast_fraction) + " (need 0.5 +- 0.01)";
  return r;
}

CheckResult check_ddf_service(const ValidationOptions& opt, const Sizes& sz, RunLedger& ledger) {
  CheckResult r{7, "DDF service splits into rho + eta and grows with gamma and 1/q", true, "", 0, {}};
  const std::vector<double> qs = {0.1, 0.2, 0.5};
  const std::vector<double> gammas = {6.0, std::sqrt(110.0), 20.0};
  std::vector<std::vector<double>> ds(qs.size(), std::vector<double>(gammas.size()));
  bool identity = true;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      SimConfig c = preset(110);
      c.gamma_exponent.reset();
      c.phy = PhyParams::from_beta(gammas[j] * gammas[j]);
      c.mobility = RandomWalk{qs[i]};
      c.protocol = {ProtocolKind::kDdf, 1};
      c.infinite_backlog = true;
      c.horizon = sz.grid_horizon;
      c.seed = opt.seed;
      const RunMetrics m = ledger.run(c);
      identity = identity && m.service_count > 0 &&
                 m.service_frames_total == m.service_rho_total + m.service_eta_total &&
                 std::abs(m.mean_service - (m.mean_rho + m.mean_eta)) <= 1e-12 * m.mean_service;
      ds[i][j] = m.mean_service;
      r.measurements.emplace_back("q=" + fmt(qs[i]) + ":gamma=" + fmt(gammas[j]) + ":D_S",
                                  m.mean_service);
    }
  }
  bool in_gamma = true;
  bool in_q = true;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      if (j + 1 < gammas.size()) in_gamma = in_gamma && ds[i][j] <= ds[i][j + 1];
      if (i + 1 < qs.size()) in_q = in_q && ds[i][j] >= ds[i + 1][j];
    }
  }
  r.passed = identity && in_gamma && in_q;
  r.detail = std::string("rho + eta identity ") + (identity ? "holds" : "BROKEN") +
             "; D_S nondecreasing in gamma: " + (in_gamma ? "yes" : "no") +
             "; nonincreasing in q: " + (in_q ? "yes" : "no") + "; D_S range [" +
             fmt(ds.back().front()) + ", " + fmt(ds.front().back()) + "]";
  return r;
}

CheckResult check_hygiene(const ValidationOptions& opt, const Sizes& sz, RunLedger& ledger) {
  CheckResult r{8, "determinism, flow conservation and relay-queue dominance", true, "", 0, {}};
  SimConfig a = preset(110);
  a.arrivals = ArrivalDistribution(kBurst);
  a.horizon = sz.hygiene_horizon;
  a.seed = opt.seed + 17;
  SimConfig b = a;
  b.mobility = RandomWaypoint{0.1, 0.6, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
  b.buffer_capacity = 25;
  b.arrivals = ArrivalDistribution::bernoulli(0.6);
  SimConfig d = a;
  d.protocol = {ProtocolKind::kDfsc, 5};
  d.arrivals = ArrivalDistribution::bernoulli(0.02);
  bool identical = true;
  for (const SimConfig* c : {&a, &b, &d}) {
    const RunMetrics first = ledger.run(*c);
    const RunMetrics second = ledger.run(*c);
    identical = identical && first == second;
  }
  const ReplicateResult serial = replicate(a, 3, 1);
  const ReplicateResult threaded = replicate(a, 3, 3);
  for (std::size_t i = 0; i < serial.runs.size(); ++i) {
    ledger.record(serial.runs[i]);
    ledger.record(threaded.runs[i]);
    identical = identical && serial.runs[i] == threaded.runs[i];
  }

  r.measurements.emplace_back("runs_audited", static_cast<double>(ledger.runs));
  r.measurements.emplace_back("conservation_checks", static_cast<double>(ledger.conservation_checks));
  r.measurements.emplace_back("conservation_violations", static_cast<double>(ledger.conservation_violations));
  r.measurements.emplace_back("lindley_violations", static_cast<double>(ledger.lindley_violations));
  r.measurements.emplace_back("stale_copy_violations", static_cast<double>(ledger.stale_copy_violations));
  r.measurements.emplace_back("dominance_violating_runs", static_cast<double>(ledger.dominance_runs));
  const bool clean = ledger.conservation_checks > 0 && ledger.conservation_violations == 0 &&
                     ledger.lindley_violations == 0 && ledger.stale_copy_violations == 0;
  r.passed = identical && clean && ledger.dominance_runs == 0;
  r.detail = std::string("reruns ") + (identical ? "bit-identical" : "DIFFER") + "; " +
             std::to_string(ledger.runs) + " runs audited, " +
             std::to_string(ledger.conservation_checks) + " conservation checks, violations " +
             std::to_string(ledger.conservation_violations) + "/" +
             std::to_string(ledger.lindley_violations) + "/" +
             std::to_string(ledger.stale_copy_violations) +
             " (conservation/lindley/stale), dominance-violating runs " +
             std::to_string(ledger.dominance_runs);
  return r;
}

}  // namespace

double faulty_wait_formula(double lambda_s, double lambda_s2, const ServiceMoments& m) {
  return mx_g1_wait(lambda_s, lambda_s2, m) - m.b;
}

std::vector<CheckResult> run_validation(const ValidationOptions& opt) {
  const Sizes sz = sizes_for(opt.scale);
  RunLedger ledger;
  std::vector<CheckResult> out;
  const auto wanted = [&](int c) { return opt.only.empty() || opt.only.contains(c); };
  const auto timed = [&](int c, auto&& check) {
    if (!wanted(c)) return;
    if (opt.progress) opt.progress("criterion " + std::to_string(c) + " ...");
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res = check();
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(res));
  };
  timed(1, [&] { return check_queue_formula(opt, sz); });
  timed(2, [&] { return check_connection_slope(opt, sz); });
  timed(3, [&] { return check_throughput_trend(opt, sz, ledger); });
  timed(4, [&] { return check_mobility_insensitivity(opt, sz, ledger); });
  timed(5, [&] { return check_protocol_ordering(opt, sz, ledger); });
  timed(6, [&] { return check_alternation(opt, sz, ledger); });
  timed(7, [&] { return check_ddf_service(opt, sz, ledger); });
  timed(8, [&] { return check_hygiene(opt, sz, ledger); });
  return out;
}

void write_validation_csv(std::ostream& out, const std::vector<CheckResult>& results) {
  out << "criterion,name,passed,seconds,measurement,value\n";
  for (const auto& r : results) {
    const auto prefix = std::to_string(r.criterion) + ",\"" + r.name + "\"," +
                        (r.passed ? "1" : "0") + "," + format_number(r.seconds) + ",";
    if (r.measurements.empty()) out << prefix << ",\n";
    for (const auto& [name, value] : r.measurements) {
      out << prefix << name << ',' << format_number(value) << '\n';
    }
  }
}

void write_validation_summary(std::ostream& out, const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    out << "criterion " << r.criterion << ": " << (r.passed ? "PASS" : "FAIL") << "  " << r.name
        << "  [" << std::fixed << std::setprecision(1) << r.seconds << " s]\n"
        << std::defaultfloat << "    " << r.detail << '\n';
  }
}

}  // namespace obdwf::cli
