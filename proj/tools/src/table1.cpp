#include "circmc/analysis.hpp"
#include "circmc/engine.hpp"
#include "circmc/schedules.hpp"
#include "circmc/targets.hpp"
#include "common.hpp"

namespace circmc::tools {

namespace {

std::optional<std::size_t> prediction_column(bool truncated, GridFinish finish) {
  if (finish == GridFinish::Multi) return truncated ? 1 : 0;
  if (!truncated) return 2;
  return std::nullopt;
}

}  // namespace

Report cmd_table1(const RunConfig& config) {
  const detail::Stopwatch clock;
  const auto n = config.n.value_or(100);
  if (n < 2) throw ConfigError("N must be at least 2");
  const auto ws = config.param("w", std::vector<double>{0.1, 0.2, 0.4});
  const auto schedule = config.param<std::string>("schedule", "full");
  const auto finish_name = config.param<std::string>("finish", "multi");
  const auto replicates = config.param<std::size_t>("replicates", 9);
  if (schedule != "full" && schedule != "truncated") {
    throw ConfigError("schedule must be full or truncated");
  }
  if (finish_name != "multi" && finish_name != "sweep") {
    throw ConfigError("finish must be multi or sweep");
  }
  if (replicates == 0 || ws.empty()) throw ConfigError("need at least one w and one replicate");
  const bool truncated = schedule == "truncated";
  const GridFinish finish = finish_name == "multi" ? GridFinish::Multi : GridFinish::ComponentSweep;
  const auto stages = truncated ? truncated_sigma_stages(3) : default_sigma_stages();

  const auto target = mvn9();
  const PointInit p0(ChainState{std::vector<double>(9, 0.0), {}});
  const auto reference = table1_reference_inputs();
  const auto predictions = table1_predictions(reference);
  const auto column = prediction_column(truncated, finish);

  Report report;
  nlohmann::json rows = nlohmann::json::array();
  auto& table = report.tables["coalescence.csv"];
  table.first = {"w", "replicate", "seed", "c0", "censored"};
  for (double w : ws) {
    if (!(w > 0.0)) throw ConfigError("w must be positive");
    const auto kernel = make_varying_sigma_step(target, stages, w, finish);
    std::vector<double> times;
    std::vector<bool> censored;
    for (std::size_t rep = 0; rep < replicates; ++rep) {
      const std::uint64_t seed = config.seed + rep;
      const auto result = run_circular_basic(*kernel, p0, seed, n);
      const auto& c0 = result.coalescence.front();
      times.push_back(static_cast<double>(c0.steps));
      censored.push_back(c0.censored);
      table.second.push_back({w, static_cast<double>(rep), static_cast<double>(seed),
                              static_cast<double>(c0.steps), c0.censored ? 1.0 : 0.0});
      if (report.trace.empty()) report.trace = result.y_trace;
    }
    const CoalescenceRecord record(times, censored, static_cast<double>(n));
    nlohmann::json row = {{"w", w},
                          {"c0", times},
                          {"events", record.events()},
                          {"censored", record.censored_count()}};
    if (record.events() >= 2) {
      const auto post = coalescence_posterior(record);
      row["posterior_mean"] = post.mean;
      row["interval"] = {post.lower, post.upper};
    } else {
      row["posterior_mean"] = nullptr;
      row["interval"] = nullptr;
    }
    row["predicted"] = nullptr;
    if (column) {
      for (std::size_t i = 0; i < reference.w.size(); ++i) {
        if (std::abs(reference.w[i] - w) < 1e-12) row["predicted"] = predictions[i][*column];
      }
    }
    rows.push_back(row);
  }

  std::size_t iterations = 0;
  for (const auto& s : stages) iterations += s.iterations;
  report.summary = {{"experiment", "table1"},
                    {"schedule", schedule},
                    {"finish", finish_name},
                    {"N", n},
                    {"replicates", replicates},
                    {"metropolis_updates_per_step", iterations},
                    {"rows", rows}};
  report.manifest = detail::base_manifest(config);
  report.manifest.update({{"experiment", "table1"},
                          {"N", n},
                          {"schedule", schedule},
                          {"finish", finish_name},
                          {"p0", p0.descriptor()},
                          {"wall_time_seconds", clock.seconds()}});
  return report;
}

}  // namespace circmc::tools
