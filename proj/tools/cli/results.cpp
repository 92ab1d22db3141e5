#include "results.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace obdwf::cli {

namespace {

const char* const kHeader = "axis,axis_value,protocol,metric,mean,ci_low,ci_high,n_reps,seed_base";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("bad number in CSV: '" + s + "'");
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void ResultTable::add(const std::string& axis_value, const ProtocolSpec& protocol,
                      const ReplicateResult& result, std::uint64_t seed_base) {
  for (const auto& [name, agg] : result.metrics) {
    rows.push_back({axis_value, to_string(protocol), name, agg.mean, agg.ci_low, agg.ci_high,
                    agg.n, seed_base});
  }
}

std::vector<std::string> ResultTable::axis_values() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.axis_value) == out.end()) out.push_back(r.axis_value);
  }
  return out;
}

std::vector<std::string> ResultTable::protocols() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.protocol) == out.end()) out.push_back(r.protocol);
  }
  return out;
}

const ResultRow* ResultTable::find(const std::string& axis_value, const std::string& protocol,
                                   const std::string& metric) const {
  for (const auto& r : rows) {
    if (r.axis_value == axis_value && r.protocol == protocol && r.metric == metric) return &r;
  }
  return nullptr;
}

void write_csv(std::ostream& out, const ResultTable& table) {
  out << kHeader << '\n';
  for (const auto& r : table.rows) {
    out << table.axis << ',' << r.axis_value << ',' << r.protocol << ',' << r.metric << ','
        << format_number(r.mean) << ',' << format_number(r.ci_low) << ','
        << format_number(r.ci_high) << ',' << r.n_reps << ',' << r.seed_base << '\n';
  }
}

ResultTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error("unexpected CSV header");
  }
  ResultTable table;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 9) throw std::runtime_error("CSV row has wrong width: " + line);
    if (first) {
      table.axis = cells[0];
      first = false;
    }
    ResultRow r;
    r.axis_value = cells[1];
    r.protocol = cells[2];
    r.metric = cells[3];
    r.mean = parse_double(cells[4]);
    r.ci_low = parse_double(cells[5]);
    r.ci_high = parse_double(cells[6]);
    r.n_reps = std::stoul(cells[7]);
    r.seed_base = std::stoull(cells[8]);
    table.rows.push_back(r);
  }
  return table;
}

void write_wide_csv(std::ostream& out, const ResultTable& table, const std::string& metric) {
  const auto protocols = table.protocols();
  out << table.axis;
  for (const auto& p : protocols) out << ',' << p;
  out << '\n';
  for (const auto& v : table.axis_values()) {
    out << v;
    for (const auto& p : protocols) {
      const ResultRow* row = table.find(v, p, metric);
      out << ',' << (row ? format_number(row->mean) : "nan");
    }
    out << '\n';
  }
}

void write_plot_script(std::ostream& out, const std::string& wide_csv_name,
                       const ResultTable& table, const std::string& metric) {
  const auto protocols = table.protocols();
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel '" << table.axis << "'\n"
      << "set ylabel '" << metric << "'\n"
      << "set grid\n"
      << "set terminal pngcairo size 900,600\n"
      << "set output '" << std::filesystem::path(wide_csv_name).stem().string() << ".png'\n"
      << "plot ";
  for (std::size_t i = 0; i < protocols.size(); ++i) {
    out << (i ? ", \\\n     " : "") << "'" << wide_csv_name << "' using 1:" << i + 2
        << " with linespoints";
  }
  out << '\n';
}

void write_stability_csv(std::ostream& out, const std::string& axis,
                         const std::vector<StabilityRow>& rows) {
  out << "axis,axis_value,protocol,lambda_stable,lambda_unstable,steps,seed\n";
  for (const auto& r : rows) {
    out << axis << ',' << r.axis_value << ',' << r.protocol << ','
        << format_number(r.bracket.lambda_stable) << ','
        << format_number(r.bracket.lambda_unstable) << ',' << r.bracket.steps << ',' << r.seed
        << '\n';
  }
}

}  // namespace obdwf::cli
