#include <fstream>
#include <numeric>
#include <set>

#include "circmc/io.hpp"
#include "common.hpp"

namespace circmc::tools {

namespace {

std::optional<std::size_t> optional_size(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::size_t>();
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"experiment", "seed",    "n",      "r",  "k",
                                              "max_restarts", "threads", "params", "out"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig c;
  try {
    c.experiment = j.value("experiment", std::string());
    c.seed = j.value("seed", std::uint64_t{1});
    c.n = optional_size(j, "n");
    c.r = optional_size(j, "r");
    c.k = optional_size(j, "k");
    c.max_restarts = optional_size(j, "max_restarts");
    c.threads = j.value("threads", std::size_t{1});
    if (j.contains("params")) c.params = j.at("params");
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!c.params.is_object()) throw ConfigError("params must be an object");
  return c;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = {{"experiment", experiment}, {"seed", seed}, {"threads", threads},
                      {"params", params}};
  if (n) j["n"] = *n;
  if (r) j["r"] = *r;
  if (k) j["k"] = *k;
  if (max_restarts) j["max_restarts"] = *max_restarts;
  if (!out.empty()) j["out"] = out.string();
  return j;
}

Report run_experiment(const RunConfig& config) {
  if (config.experiment == "normal1d") return cmd_normal1d(config);
  if (config.experiment == "bimodal") return cmd_bimodal(config);
  if (config.experiment == "mvn9") return cmd_mvn9(config);
  if (config.experiment == "table1") return cmd_table1(config);
  if (config.experiment == "logistic") return cmd_logistic(config);
  throw ConfigError("unknown experiment '" + config.experiment + "'");
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_trace_csv(dir / "trace.csv", report.trace);
  write_json(dir / "summary.json", report.summary);
  write_json(dir / "manifest.json", report.manifest);
  for (const auto& [name, table] : report.tables) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    const auto& [header, rows] = table;
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
      out << '\n';
    }
  }
}

ModeCoverage classify_modes(const std::vector<ChainState>& trace, double threshold) {
  bool below = false;
  bool above = false;
  for (const auto& s : trace) {
    (s.x[0] < threshold ? below : above) = true;
  }
  if (below && above) return ModeCoverage::BothModes;
  return below ? ModeCoverage::BelowOnly : ModeCoverage::AboveOnly;
}

namespace detail {

Sizes circular_sizes(const RunConfig& config, std::size_t default_n, std::size_t default_r) {
  Sizes s;
  s.n = config.n.value_or(default_n);
  s.r = config.r.value_or(default_r);
  if (s.n < 2) throw ConfigError("N must be at least 2");
  if (s.r == 0 || s.n % s.r != 0) {
    throw ConfigError("r = " + std::to_string(s.r) + " does not divide N = " + std::to_string(s.n));
  }
  s.k = config.k.value_or(s.n / 2 - 1);
  if (2 * s.k >= s.n) throw ConfigError("k must be less than N/2");
  s.max_restarts = config.max_restarts.value_or(s.r);
  if (s.max_restarts == 0) throw ConfigError("max_restarts must be at least 1");
  return s;
}

KernelPtr configured_kernel(const RunConfig& config, const TargetPtr& target,
                            const nlohmann::json& fallback) {
  const nlohmann::json& descriptor = config.params.contains("kernel") ? config.params.at("kernel")
                                                                      : fallback;
  try {
    return make_kernel(descriptor, target);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json coalescence_json(const std::vector<CoalescenceCount>& counts) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : counts) out.push_back({{"steps", c.steps}, {"censored", c.censored}});
  return out;
}

nlohmann::json base_manifest(const RunConfig& config) {
  return {{"tool", "circmc"}, {"version", "0.1.0"}, {"config", config.to_json()}};
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double total = 0.0;
  for (double x : v) total += (x - m) * (x - m);
  return total / static_cast<double>(v.size() - 1);
}

}  // namespace detail
}  // namespace circmc::tools
