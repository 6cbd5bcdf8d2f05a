#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "circmc/state.hpp"

namespace circmc::tools {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// One experiment run. Unset sizes fall back to the experiment's defaults;
/// experiment-specific knobs live in `params`.
struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::optional<std::size_t> n;
  std::optional<std::size_t> r;
  std::optional<std::size_t> k;
  std::optional<std::size_t> max_restarts;
  std::size_t threads = 1;
  nlohmann::json params = nlohmann::json::object();
  std::filesystem::path out;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  template <typename T>
  T param(const std::string& key, T fallback) const {
    if (!params.contains(key)) return fallback;
    try {
      return params.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("parameter '" + key + "' has the wrong type");
    }
  }
};

/// What a command produced. Files are written by write_report.
struct Report {
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json manifest = nlohmann::json::object();
  std::vector<ChainState> trace;
  // Extra CSV files: name -> (header, rows).
  std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::vector<double>>>>
      tables;
};

Report cmd_normal1d(const RunConfig& config);
Report cmd_bimodal(const RunConfig& config);
Report cmd_mvn9(const RunConfig& config);
Report cmd_table1(const RunConfig& config);
Report cmd_logistic(const RunConfig& config);

Report run_experiment(const RunConfig& config);

/// trace.csv, summary.json, manifest.json and any extra tables.
void write_report(const Report& report, const std::filesystem::path& dir);

/// Classification of a wrapped-around trace against a mode threshold.
enum class ModeCoverage { BothModes, BelowOnly, AboveOnly };
ModeCoverage classify_modes(const std::vector<ChainState>& trace, double threshold);

}  // namespace circmc::tools
