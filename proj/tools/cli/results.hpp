#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "obdwf/engine.hpp"

namespace obdwf::cli {

struct ResultRow {
  std::string axis_value;
  std::string protocol;
  std::string metric;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_reps = 0;
  std::uint64_t seed_base = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
  std::string axis = "none";
  std::vector<ResultRow> rows;

  void add(const std::string& axis_value, const ProtocolSpec& protocol,
           const ReplicateResult& result, std::uint64_t seed_base);
  /// Mean of `metric` for each (axis value, protocol), in insertion order.
  std::vector<std::string> axis_values() const;
  std::vector<std::string> protocols() const;
  const ResultRow* find(const std::string& axis_value, const std::string& protocol,
                        const std::string& metric) const;
};

/// %.15g; non-finite values print as nan, inf, -inf.
std::string format_number(double v);

void write_csv(std::ostream& out, const ResultTable& table);
ResultTable read_csv(std::istream& in);

/// One row per axis value, one column per protocol.
void write_wide_csv(std::ostream& out, const ResultTable& table, const std::string& metric);

/// gnuplot commands plotting the wide table with the given file name.
void write_plot_script(std::ostream& out, const std::string& wide_csv_name,
                       const ResultTable& table, const std::string& metric);

struct StabilityRow {
  std::string axis_value;
  std::string protocol;
  StableRateBracket bracket;
  std::uint64_t seed = 0;
};

void write_stability_csv(std::ostream& out, const std::string& axis,
                         const std::vector<StabilityRow>& rows);

}  // namespace obdwf::cli
