#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "validation.hpp"

namespace obdwf::cli {

enum ExitCode { kExitOk = 0, kExitValidationFailed = 1, kExitUsage = 2 };

struct CommonOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::filesystem::path out = ".";
  std::vector<std::string> overrides;
};

/// Resolves --preset / --config plus overrides into an experiment. Built-in
/// defaults are used when neither is given.
ExperimentSpec resolve_experiment(const CommonOptions& common);

struct SweepOptions {
  std::optional<std::string> axis;
  std::optional<std::string> values;
  std::optional<int> reps;
};

struct StabilityOptions {
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<double> resolution;
};

struct ValidateOptions {
  Scale scale = Scale::kFull;
  std::vector<int> only;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = ".";
  bool inject_wait_fault = false;
};

/// Each returns an ExitCode; usage problems throw ConfigParseError or
/// std::invalid_argument, which main() maps to kExitUsage.
int cmd_run(const CommonOptions& common, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommonOptions& common, const SweepOptions& sweep, std::ostream& out,
              std::ostream& err);
int cmd_stability(const CommonOptions& common, const StabilityOptions& opts, std::ostream& out,
                  std::ostream& err);
int cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace obdwf::cli
