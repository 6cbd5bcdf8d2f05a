#include <algorithm>

#include "circmc/engine.hpp"
#include "circmc/initial.hpp"
#include "circmc/targets.hpp"
#include "common.hpp"

namespace circmc::tools {

namespace {

std::size_t max_steps(const std::vector<CoalescenceCount>& counts) {
  std::size_t m = 0;
  for (const auto& c : counts) m = std::max(m, c.steps);
  return m;
}

std::vector<double> first_coordinates(const std::vector<ChainState>& trace) {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& s : trace) out.push_back(s.x[0]);
  return out;
}

}  // namespace

Report cmd_normal1d(const RunConfig& config) {
  const detail::Stopwatch clock;
  const auto sizes = detail::circular_sizes(config, 1000, 10);
  const double w = config.param("w", 0.5);
  const double p0_sd = config.param("p0_sd", 5.0);
  const auto replicates = config.param<std::size_t>("replicates", 1);
  const auto threshold = config.param<std::size_t>("c_threshold", 150);
  if (replicates == 0) throw ConfigError("replicates must be positive");

  const auto target = normal1d();
  const auto kernel = detail::configured_kernel(config, target, {{"type", "random_grid"}, {"w", w}});
  const IsotropicNormalInit p0({0.0}, p0_sd);

  Report report;
  nlohmann::json runs = nlohmann::json::array();
  std::size_t c_total = 0;
  std::size_t c_below = 0;
  std::size_t coalesced = 0;
  std::vector<double> pooled;
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    const std::uint64_t seed = config.seed + rep;
    const auto result = run_with_diagnostics(*kernel, p0, seed, sizes.n, sizes.r, sizes.k);
    const auto ys = first_coordinates(result.y_trace);
    for (const auto& c : result.coalescence) {
      ++c_total;
      if (!c.censored && c.steps < threshold) ++c_below;
    }
    if (result.status == RunStatus::Coalesced) ++coalesced;
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    runs.push_back({{"seed", seed},
                    {"status", to_string(result.status)},
                    {"c", detail::coalescence_json(result.coalescence)},
                    {"max_c", max_steps(result.coalescence)},
                    {"evaluations", result.evaluations},
                    {"mean", detail::mean_of(ys)},
                    {"variance", detail::variance_of(ys)}});
    if (rep == 0) report.trace = result.y_trace;
  }

  report.summary = {{"experiment", "normal1d"},
                    {"runs", runs},
                    {"replicates", replicates},
                    {"all_coalesced", coalesced == replicates},
                    {"c_threshold", threshold},
                    {"fraction_c_below_threshold",
                     static_cast<double>(c_below) / static_cast<double>(c_total)},
                    {"pooled_mean", detail::mean_of(pooled)}};
  report.manifest = detail::base_manifest(config);
  report.manifest.update({{"experiment", "normal1d"},
                          {"N", sizes.n},
                          {"r", sizes.r},
                          {"k", sizes.k},
                          {"kernel", kernel->descriptor()},
                          {"p0", p0.descriptor()},
                          {"status", runs[0]["status"]},
                          {"c", runs[0]["c"]},
                          {"wall_time_seconds", clock.seconds()}});
  return report;
}

Report cmd_bimodal(const RunConfig& config) {
  const detail::Stopwatch clock;
  const auto sizes = detail::circular_sizes(config, 1000, 10);
  const double w = config.param("w", 0.5);
  const double p0_sd = config.param("p0_sd", 5.0);
  const auto replicates = config.param<std::size_t>("replicates", 200);
  const double threshold = config.param("mode_threshold", 0.5);
  if (replicates == 0) throw ConfigError("replicates must be positive");

  const auto target = bimodal();
  const auto kernel = detail::configured_kernel(config, target, {{"type", "random_grid"}, {"w", w}});
  const IsotropicNormalInit p0({0.0}, p0_sd);
  ParallelOptions popt;
  popt.r = sizes.r;
  popt.max_restarts = sizes.max_restarts;
  popt.threads = config.threads;

  Report report;
  nlohmann::json runs = nlohmann::json::array();
  std::size_t single_mode = 0;
  std::size_t split = 0;
  std::size_t both = 0;
  std::size_t cap = 0;
  std::size_t wrap_failed = 0;
  std::size_t worst_c = 0;
  std::vector<double> pooled;
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    const std::uint64_t seed = config.seed + rep;
    const auto diag = run_with_diagnostics(*kernel, p0, seed, sizes.n, sizes.r, sizes.k);
    const auto par = run_parallel(*kernel, p0, seed, sizes.n, popt);
    std::string label;
    if (par.status == RunStatus::SplitCycles) {
      label = "split_cycles";
      ++split;
    } else {
      const auto coverage = classify_modes(diag.y_trace, threshold);
      label = coverage == ModeCoverage::BothModes ? "both_modes" : "single_mode";
      ++(coverage == ModeCoverage::BothModes ? both : single_mode);
    }
    if (par.status == RunStatus::CapExceeded) ++cap;
    if (diag.status == RunStatus::WrapFailed) ++wrap_failed;
    const auto ys = first_coordinates(diag.y_trace);
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    worst_c = std::max(worst_c, max_steps(diag.coalescence));
    runs.push_back({{"seed", seed},
                    {"class", label},
                    {"status", to_string(diag.status)},
                    {"parallel_status", to_string(par.status)},
                    {"distinct_cycles", par.parallel->distinct_cycles},
                    {"max_c", max_steps(diag.coalescence)},
                    {"c", detail::coalescence_json(diag.coalescence)},
                    {"mean", detail::mean_of(ys)}});
    if (rep == 0) report.trace = diag.y_trace;
  }

  const auto frac = [&](std::size_t count) {
    return static_cast<double>(count) / static_cast<double>(replicates);
  };
  report.summary = {{"experiment", "bimodal"},
                    {"replicates", replicates},
                    {"mode_threshold", threshold},
                    {"fraction_single_mode", frac(single_mode)},
                    {"fraction_split_cycles", frac(split)},
                    {"fraction_both_modes", frac(both)},
                    {"cap_exceeded_runs", cap},
                    {"wrap_failed_runs", wrap_failed},
                    {"largest_c", worst_c},
                    {"pooled_mean", detail::mean_of(pooled)},
                    {"target_mean", target->mean()},
                    {"runs", runs}};
  report.manifest = detail::base_manifest(config);
  report.manifest.update({{"experiment", "bimodal"},
                          {"N", sizes.n},
                          {"r", sizes.r},
                          {"k", sizes.k},
                          {"max_restarts", sizes.max_restarts},
                          {"kernel", kernel->descriptor()},
                          {"p0", p0.descriptor()},
                          {"status", runs[0]["status"]},
                          {"c", runs[0]["c"]},
                          {"wall_time_seconds", clock.seconds()}});
  return report;
}

}  // namespace circmc::tools
