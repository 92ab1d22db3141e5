#include "commands.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "results.hpp"

namespace obdwf::cli {

namespace {

std::filesystem::path prepare_out(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigParseError("cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigParseError("cannot write '" + path.string() + "'");
  return f;
}

std::vector<std::string> axis_points(const ExperimentSpec& spec) {
  if (spec.axis) return spec.values;
  return {"-"};
}

SimConfig point_config(const ExperimentSpec& spec, const std::string& value,
                       const ProtocolSpec& protocol) {
  SimConfig c = spec.base;
  c.protocol = protocol;
  if (spec.axis) c = apply_axis(c, *spec.axis, value);
  validate(c);
  return c;
}

std::vector<ProtocolSpec> protocols_for(const ExperimentSpec& spec) {
  if (spec.axis && *spec.axis == SweepAxis::kProtocol) return {spec.protocols.front()};
  return spec.protocols;
}

void print_warnings(const SimConfig& c, std::ostream& err) {
  for (const auto& w : validate(c)) err << "warning: " << w << '\n';
}

int execute_table(const ExperimentSpec& spec, const CommonOptions& common, std::ostream& out,
                  std::ostream& err) {
  const auto dir = prepare_out(common.out);
  const auto points = axis_points(spec);
  const auto protocols = protocols_for(spec);
  // Validate every point before simulating anything.
  for (const auto& v : points) {
    for (const auto& p : protocols) point_config(spec, v, p);
  }
  print_warnings(spec.base, err);

  ResultTable table;
  table.axis = spec.axis ? std::string(to_string(*spec.axis)) : "none";
  bool any_unstable = false;
  for (const auto& v : points) {
    for (const auto& p : protocols) {
      const SimConfig c = point_config(spec, v, p);
      const ReplicateResult res = replicate(c, spec.reps, spec.jobs);
      const ProtocolSpec label = spec.axis && *spec.axis == SweepAxis::kProtocol ? c.protocol : p;
      table.add(v, label, res, c.seed);
      if (!c.infinite_backlog && res.metric("stable").mean < 1.0) {
        any_unstable = true;
        err << "warning: unstable run at " << table.axis << "=" << v << " protocol "
            << to_string(label) << '\n';
      }
    }
  }

  const auto csv = dir / (spec.name + ".csv");
  const auto wide = dir / (spec.name + "_wide.csv");
  const auto plot = dir / (spec.name + ".gp");
  {
    auto f = open_out(csv);
    write_csv(f, table);
  }
  {
    auto f = open_out(wide);
    write_wide_csv(f, table, spec.metric);
  }
  {
    auto f = open_out(plot);
    write_plot_script(f, wide.filename().string(), table, spec.metric);
  }

  out << spec.name << ": " << spec.metric << " (mean of " << spec.reps << " replication"
      << (spec.reps == 1 ? "" : "s") << ")\n";
  write_wide_csv(out, table, spec.metric);
  out << "unstable: " << (any_unstable ? "yes" : "no") << '\n'
      << "wrote " << csv.string() << ", " << wide.string() << ", " << plot.string() << '\n';
  return kExitOk;
}

}  // namespace

ExperimentSpec resolve_experiment(const CommonOptions& common) {
  if (common.config && common.preset) {
    throw ConfigParseError("--config and --preset are mutually exclusive");
  }
  std::vector<std::string> overrides = common.overrides;
  if (common.seed) overrides.push_back("run.seed=" + std::to_string(*common.seed));
  if (common.jobs) overrides.push_back("run.jobs=" + std::to_string(*common.jobs));
  if (common.config) return load_experiment(*common.config, overrides);
  if (common.preset) return load_experiment(find_preset(*common.preset), overrides);
  return parse_experiment("", overrides, "<defaults>");
}

int cmd_run(const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return execute_table(resolve_experiment(common), common, out, err);
}

int cmd_sweep(const CommonOptions& common, const SweepOptions& sweep, std::ostream& out,
              std::ostream& err) {
  ExperimentSpec spec = resolve_experiment(common);
  if (sweep.axis) spec.axis = parse_sweep_axis(*sweep.axis);
  if (sweep.values) spec.values = expand_values(*sweep.values);
  if (sweep.reps) {
    if (*sweep.reps < 1) throw ConfigParseError("--reps must be at least 1");
    spec.reps = *sweep.reps;
  }
  if (!spec.axis) throw ConfigParseError("sweep needs an axis (--axis or [sweep] axis)");
  return execute_table(spec, common, out, err);
}

int cmd_stability(const CommonOptions& common, const StabilityOptions& opts, std::ostream& out,
                  std::ostream& err) {
  ExperimentSpec spec = resolve_experiment(common);
  const double lo = opts.lo.value_or(spec.lambda_lo);
  const double hi = opts.hi.value_or(spec.lambda_hi);
  const double res = opts.resolution.value_or(spec.lambda_resolution);
  if (!(lo > 0.0 && lo < hi && hi <= 1.0)) {
    throw ConfigParseError("stability bounds must satisfy 0 < lo < hi <= 1");
  }
  if (!(res > 0.0)) throw ConfigParseError("resolution must be positive");
  const auto dir = prepare_out(common.out);
  const auto points = axis_points(spec);
  const auto protocols = protocols_for(spec);
  for (const auto& v : points) {
    for (const auto& p : protocols) point_config(spec, v, p);
  }
  print_warnings(spec.base, err);

  std::vector<StabilityRow> rows;
  for (const auto& v : points) {
    for (const auto& p : protocols) {
      const SimConfig c = point_config(spec, v, p);
      rows.push_back({v, to_string(c.protocol), max_stable_rate(c, lo, hi, res), c.seed});
    }
  }
  const std::string axis = spec.axis ? std::string(to_string(*spec.axis)) : "none";
  const auto csv = dir / (spec.name + "_stability.csv");
  {
    auto f = open_out(csv);
    write_stability_csv(f, axis, rows);
  }
  write_stability_csv(out, axis, rows);
  out << "wrote " << csv.string() << '\n';
  return kExitOk;
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err) {
  ValidationOptions v;
  v.scale = opts.scale;
  if (opts.seed) v.seed = *opts.seed;
  for (int c : opts.only) {
    if (c < 1 || c > 8) throw ConfigParseError("--only takes criteria 1..8");
    v.only.insert(c);
  }
  if (opts.inject_wait_fault) v.wait_formula = faulty_wait_formula;
  v.progress = [&err](const std::string& msg) { err << msg << std::endl; };
  const auto dir = prepare_out(opts.out);

  const auto results = run_validation(v);
  const auto csv = dir / "validation.csv";
  {
    auto f = open_out(csv);
    write_validation_csv(f, results);
  }
  write_validation_csv(out, results);
  out << '\n';
  write_validation_summary(out, results);
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;
  out << (ok ? "all checks passed" : "validation FAILED") << "; wrote " << csv.string() << '\n';
  return ok ? kExitOk : kExitValidationFailed;
}

}  // namespace obdwf::cli
