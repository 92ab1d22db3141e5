#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "obdwf/analysis.hpp"

namespace obdwf::cli {

enum class Scale { kQuick, kFull };

using WaitFormula = std::function<double(double, double, const ServiceMoments&)>;

struct ValidationOptions {
  Scale scale = Scale::kFull;
  std::uint64_t seed = 1;
  std::set<int> only;  // empty runs every check
  WaitFormula wait_formula = mx_g1_wait;
  std::function<void(const std::string&)> progress;
};

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> measurements;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options);

/// criterion,name,passed,seconds,measurement,value
void write_validation_csv(std::ostream& out, const std::vector<CheckResult>& results);
void write_validation_summary(std::ostream& out, const std::vector<CheckResult>& results);

/// mx_g1_wait without the trailing service term; used to exercise the
/// failure path of the suite.
double faulty_wait_formula(double lambda_s, double lambda_s2, const ServiceMoments& m);

}  // namespace obdwf::cli
