#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace obdwf::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment", {"name", "metric"}},
      {"topology", {"relays", "radius", "regions"}},
      {"mobility", {"model", "q", "speed_min", "speed_max", "pause_max", "resample_on_stay"}},
      {"channel",
       {"bandwidth_hz", "power", "power_db", "xi", "alpha", "slot_s", "beta", "rate_bps",
        "gamma_exponent", "fading", "direct_link"}},
      {"traffic", {"arrivals", "infinite_backlog", "packet_bits", "buffer"}},
      {"protocol", {"protocols"}},
      {"run",
       {"horizon", "warmup", "seed", "reps", "jobs", "conservation_interval", "slope_eps",
        "c_tail", "track_connectivity", "trajectory_points"}},
      {"sweep", {"axis", "values"}},
      {"stability", {"lo", "hi", "resolution"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::string origin) : tree_(tree), origin_(std::move(origin)) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) {
      return trim(*v);
    }
    return std::nullopt;
  }

  [[noreturn]] void bad(const std::string& key, const std::string& value,
                        const std::string& why) const {
    throw ConfigParseError(origin_ + ": " + key + " = '" + value + "': " + why);
  }

  template <typename T>
  void get(const std::string& key, T& out) const {
    const auto v = raw(key);
    if (!v) return;
    out = convert<T>(key, *v);
  }

  template <typename T>
  T convert(const std::string& key, const std::string& v) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
      if (v == "false" || v == "0" || v == "no" || v == "off") return false;
      bad(key, v, "expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else {
      std::istringstream in(v);
      T x{};
      in >> x;
      if (in.fail() || !(in >> std::ws).eof()) {
        bad(key, v, std::is_integral_v<T> ? "expected an integer" : "expected a number");
      }
      if constexpr (std::is_unsigned_v<T>) {
        if (v.front() == '-') bad(key, v, "expected a nonnegative integer");
      }
      return x;
    }
  }

 private:
  const pt::ptree& tree_;
  std::string origin_;
};

void check_keys(const pt::ptree& tree, const std::string& origin) {
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    const auto it = keys.find(section);
    if (it == keys.end()) {
      throw ConfigParseError(origin + ": unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) {
        throw ConfigParseError(origin + ": unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
}

std::map<std::uint32_t, double> parse_pmf(const Reader& r, const std::string& key,
                                          const std::string& text) {
  std::map<std::uint32_t, double> pmf;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) r.bad(key, text, "expected value:probability pairs");
    const auto k = r.convert<std::uint32_t>(key, trim(item.substr(0, colon)));
    pmf[k] += r.convert<double>(key, trim(item.substr(colon + 1)));
  }
  return pmf;
}

void apply_overrides(pt::ptree& tree, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq || dot == 0 ||
        dot + 1 == eq) {
      throw ConfigParseError("override '" + o + "' must look like section.key=value");
    }
    tree.put(pt::ptree::path_type(trim(o.substr(0, eq)), '.'), trim(o.substr(eq + 1)));
  }
}

}  // namespace

std::vector<std::string> expand_values(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3 && text.find(',') == std::string::npos) {
    const double start = std::stod(parts[0]);
    const double stop = std::stod(parts[1]);
    const double step = std::stod(parts[2]);
    if (!(step > 0.0) || stop < start) {
      throw ConfigParseError("range '" + text + "' needs start <= stop and a positive step");
    }
    std::vector<std::string> out;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
      std::ostringstream v;
      v.precision(15);
      v << start + static_cast<double>(i) * step;
      out.push_back(v.str());
    }
    return out;
  }
  return split(text, ',');
}

ExperimentSpec parse_experiment(const std::string& text,
                                const std::vector<std::string>& overrides,
                                const std::string& origin) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigParseError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  apply_overrides(tree, overrides);
  check_keys(tree, origin);
  const Reader r(tree, origin);

  ExperimentSpec spec;
  SimConfig& c = spec.base;
  r.get("experiment.name", spec.name);
  r.get("experiment.metric", spec.metric);

  r.get("topology.relays", c.relays);
  r.get("topology.radius", c.radius);
  r.get("topology.regions", c.regions);

  const std::string model = r.raw("mobility.model").value_or("random_walk");
  if (model == "random_walk") {
    RandomWalk walk{0.2};
    r.get("mobility.q", walk.q);
    c.mobility = walk;
  } else if (model == "waypoint") {
    RandomWaypoint wp;
    int pause_max = 10;
    r.get("mobility.speed_min", wp.speed_min);
    r.get("mobility.speed_max", wp.speed_max);
    r.get("mobility.pause_max", pause_max);
    if (pause_max < 0) r.bad("mobility.pause_max", std::to_string(pause_max), "must be >= 0");
    for (int p = 0; p <= pause_max; ++p) wp.pause_set.push_back(p);
    c.mobility = wp;
  } else {
    r.bad("mobility.model", model, "expected random_walk or waypoint");
  }
  r.get("mobility.resample_on_stay", c.resample_on_stay);

  r.get("channel.bandwidth_hz", c.phy.bandwidth_hz);
  r.get("channel.power", c.phy.power);
  if (auto db = r.raw("channel.power_db")) {
    c.phy.power = db_to_linear(r.convert<double>("channel.power_db", *db));
  }
  r.get("channel.xi", c.phy.xi);
  r.get("channel.alpha", c.phy.alpha);
  r.get("channel.slot_s", c.phy.slot_s);
  if (auto g = r.raw("channel.gamma_exponent")) {
    if (*g == "none") {
      c.gamma_exponent.reset();
    } else {
      c.gamma_exponent = r.convert<double>("channel.gamma_exponent", *g);
    }
  }
  const auto beta = r.raw("channel.beta");
  const auto rate = r.raw("channel.rate_bps");
  if (beta && rate) {
    throw ConfigParseError(origin + ": channel.beta and channel.rate_bps are mutually exclusive");
  }
  if (beta) {
    const double b = r.convert<double>("channel.beta", *beta);
    if (!(b > 1.0)) r.bad("channel.beta", *beta, "must exceed 1");
    c.phy.rate_bps = c.phy.bandwidth_hz * std::log2(b);
    c.gamma_exponent.reset();
  } else if (rate) {
    c.phy.rate_bps = r.convert<double>("channel.rate_bps", *rate);
    c.gamma_exponent.reset();
  }
  if (auto f = r.raw("channel.fading"); f && *f != "rayleigh") {
    TabulatedFading table;
    for (const auto& item : split(*f, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) r.bad("channel.fading", *f, "expected rayleigh or gain:probability pairs");
      table.gains.push_back(r.convert<double>("channel.fading", trim(item.substr(0, colon))));
      table.probabilities.push_back(r.convert<double>("channel.fading", trim(item.substr(colon + 1))));
    }
    c.fading = table;
  }
  r.get("channel.direct_link", c.direct_link);
  apply_rate_rule(c);

  if (auto a = r.raw("traffic.arrivals")) {
    try {
      if (*a == "none") {
        c.arrivals = ArrivalDistribution::none();
      } else if (a->rfind("bernoulli:", 0) == 0) {
        c.arrivals = ArrivalDistribution::bernoulli(
            r.convert<double>("traffic.arrivals", trim(a->substr(10))));
      } else {
        c.arrivals = ArrivalDistribution(parse_pmf(r, "traffic.arrivals", *a));
      }
    } catch (const std::invalid_argument& e) {
      r.bad("traffic.arrivals", *a, e.what());
    }
  }
  r.get("traffic.infinite_backlog", c.infinite_backlog);
  r.get("traffic.packet_bits", c.packet_bits);
  r.get("traffic.buffer", c.buffer_capacity);

  if (auto p = r.raw("protocol.protocols")) {
    spec.protocols.clear();
    const auto names = *p == "all" ? std::vector<std::string>{"obdwf", "ddf", "af", "afsc:5", "dfsc:5"}
                                   : split(*p, ',');
    for (const auto& name : names) {
      try {
        spec.protocols.push_back(parse_protocol_spec(name));
      } catch (const std::invalid_argument& e) {
        r.bad("protocol.protocols", *p, e.what());
      }
    }
    if (spec.protocols.empty()) r.bad("protocol.protocols", *p, "no protocol given");
  }
  c.protocol = spec.protocols.front();

  r.get("run.horizon", c.horizon);
  r.get("run.warmup", c.warmup);
  r.get("run.seed", c.seed);
  r.get("run.reps", spec.reps);
  r.get("run.jobs", spec.jobs);
  r.get("run.conservation_interval", c.conservation_interval);
  r.get("run.slope_eps", c.stability.slope_eps);
  r.get("run.c_tail", c.stability.c_tail);
  r.get("run.track_connectivity", c.track_connectivity);
  r.get("run.trajectory_points", c.trajectory_points);
  if (spec.reps < 1) r.bad("run.reps", std::to_string(spec.reps), "must be at least 1");

  if (auto axis = r.raw("sweep.axis")) {
    try {
      spec.axis = parse_sweep_axis(*axis);
    } catch (const std::invalid_argument& e) {
      r.bad("sweep.axis", *axis, e.what());
    }
  }
  if (auto values = r.raw("sweep.values")) {
    try {
      spec.values = expand_values(*values);
    } catch (const std::exception& e) {
      r.bad("sweep.values", *values, e.what());
    }
  }

  r.get("stability.lo", spec.lambda_lo);
  r.get("stability.hi", spec.lambda_hi);
  r.get("stability.resolution", spec.lambda_resolution);

  try {
    validate(c);
  } catch (const ConfigError& e) {
    throw ConfigParseError(origin + ": " + e.what());
  }
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path,
                               const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigParseError("cannot read config file '" + path.string() + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment(buf.str(), overrides, path.string());
}

namespace {

std::vector<std::filesystem::path> preset_dirs() {
  std::vector<std::filesystem::path> dirs;
  if (const char* env = std::getenv("OBDWF_PRESET_DIR")) dirs.emplace_back(env);
#ifdef OBDWF_INSTALLED_PRESET_DIR
  dirs.emplace_back(OBDWF_INSTALLED_PRESET_DIR);
#endif
#ifdef OBDWF_SOURCE_PRESET_DIR
  dirs.emplace_back(OBDWF_SOURCE_PRESET_DIR);
#endif
  return dirs;
}

}  // namespace

std::filesystem::path find_preset(const std::string& name) {
  for (const auto& dir : preset_dirs()) {
    const auto candidate = dir / (name + ".ini");
    if (std::filesystem::exists(candidate)) return candidate;
  }
  throw ConfigParseError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  std::set<std::string> names;
  for (const auto& dir : preset_dirs()) {
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
      if (entry.path().extension() == ".ini") names.insert(entry.path().stem().string());
    }
  }
  return {names.begin(), names.end()};
}

}  // namespace obdwf::cli
