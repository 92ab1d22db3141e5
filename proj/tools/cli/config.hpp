#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obdwf/engine.hpp"

namespace obdwf::cli {

/// Malformed config text, unknown keys or bad values. what() names the file,
/// line or key at fault.
class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
  std::string name = "experiment";
  SimConfig base;
  std::vector<ProtocolSpec> protocols{ProtocolSpec{}};
  std::optional<SweepAxis> axis;
  std::vector<std::string> values;
  int reps = 1;
  int jobs = 1;
  std::string metric = "throughput_bps";  // headline metric for wide tables and plots

  double lambda_lo = 0.001;
  double lambda_hi = 0.999;
  double lambda_resolution = 0.01;
};

/// "20:200:20" expands to 20, 40, ..., 200; anything else is split on commas.
std::vector<std::string> expand_values(const std::string& text);

/// Parses INI text. Overrides have the form section.key=value and are applied
/// on top of the file before interpretation.
ExperimentSpec parse_experiment(const std::string& text,
                                const std::vector<std::string>& overrides = {},
                                const std::string& origin = "<config>");

ExperimentSpec load_experiment(const std::filesystem::path& path,
                               const std::vector<std::string>& overrides = {});

/// Looks for NAME.ini under $OBDWF_PRESET_DIR, then the installed and
/// source-tree preset directories.
std::filesystem::path find_preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace obdwf::cli
