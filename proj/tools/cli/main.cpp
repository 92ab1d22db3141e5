#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

using namespace obdwf::cli;

namespace {

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Experiment file (INI)");
  cmd->add_option("--preset", o.preset, "Named preset, e.g. fig3a");
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--jobs", o.jobs, "Worker threads for replications")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--set", o.overrides, "Override, section.key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relay-network simulator: OBDWF and cooperative baselines"};
  app.require_subcommand(1);

  CommonOptions common;
  SweepOptions sweep;
  StabilityOptions stability;
  ValidateOptions validate;
  std::string scale = "full";

  auto* run = app.add_subcommand("run", "Run the configured experiment once per point");
  add_common(run, common);

  auto* sw = app.add_subcommand("sweep", "Sweep one parameter and tabulate metrics");
  add_common(sw, common);
  sw->add_option("--axis", sweep.axis, "K, q, lambda, gamma, M or protocol");
  sw->add_option("--values", sweep.values, "Comma list or start:stop:step");
  sw->add_option("--reps", sweep.reps, "Replications per point");

  auto* st = app.add_subcommand("stability", "Bisect the maximal stable arrival rate");
  add_common(st, common);
  st->add_option("--lo", stability.lo, "Lower arrival-rate bound");
  st->add_option("--hi", stability.hi, "Upper arrival-rate bound");
  st->add_option("--resolution", stability.resolution, "Bracket width to stop at");

  auto* va = app.add_subcommand("validate", "Theory-vs-simulation checks");
  va->add_option("--scale", scale, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  va->add_option("--only", validate.only, "Restrict to these criteria")->delimiter(',');
  va->add_option("--seed", validate.seed, "Base seed");
  va->add_option("--out", validate.out, "Output directory");
  va->add_flag("--inject-fault", validate.inject_wait_fault,
               "Replace the delay formula with a wrong one (negative control)");

  auto* presets = app.add_subcommand("presets", "List available presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(common, std::cout, std::cerr);
    if (sw->parsed()) return cmd_sweep(common, sweep, std::cout, std::cerr);
    if (st->parsed()) return cmd_stability(common, stability, std::cout, std::cerr);
    if (va->parsed()) {
      validate.scale = scale == "quick" ? Scale::kQuick : Scale::kFull;
      return cmd_validate(validate, std::cout, std::cerr);
    }
    if (presets->parsed()) {
      for (const auto& name : preset_names()) std::cout << name << '\n';
      return kExitOk;
    }
  } catch (const ConfigParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
