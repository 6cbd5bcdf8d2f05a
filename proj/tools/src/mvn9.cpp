#include <cmath>
#include <limits>

#include "circmc/analysis.hpp"
#include "circmc/engine.hpp"
#include "circmc/targets.hpp"
#include "common.hpp"

namespace circmc::tools {

namespace {

struct PairRun {
  std::vector<double> iterations;
  std::vector<double> log_metric;
  std::vector<double> log_euclidean;
  std::vector<ChainState> states;  // first chain, at the recorded iterations
  std::optional<std::size_t> coalesced_at;
  StepStats stats;
};

PairRun run_pair(const Kernel& kernel, ChainState a, ChainState b, const Eigen::MatrixXd& precision,
                 std::uint64_t seed, std::size_t iterations, std::size_t stride, bool stop) {
  PairRun run;
  auto record = [&](std::size_t t) {
    const double metric = metric_sq_distance(a.x, b.x, precision);
    double euclid = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) euclid += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
    run.iterations.push_back(static_cast<double>(t));
    run.log_metric.push_back(std::log(metric));
    run.log_euclidean.push_back(std::log(euclid));
    run.states.push_back(a);
  };
  record(0);
  const auto budget = static_cast<std::int64_t>(kernel.budget());
  for (std::size_t t = 0; t < iterations; ++t) {
    const UniformBlock block = block_for(seed, t, budget);
    run.stats += kernel.apply(a, block);
    kernel.apply(b, block);
    if (a == b) {
      run.coalesced_at = t + 1;
      if (stop) {
        record(t + 1);
        break;
      }
    }
    if ((t + 1) % stride == 0) record(t + 1);
  }
  return run;
}

struct StudyDefaults {
  nlohmann::json kernel;
  double omega = 0.0;
  std::size_t iterations = 8000;
  std::size_t stride = 10;
  bool stop_on_coalescence = false;
};

StudyDefaults study_defaults(const RunConfig& config, const std::string& study) {
  const std::string mode = config.param<std::string>("mode", "single");
  if (mode != "single" && mode != "multi") throw ConfigError("mode must be single or multi");
  const bool single = mode == "single";
  const double n = 9.0;
  StudyDefaults d;
  if (study == "approach" || study == "coalesce") {
    const double w = config.param("w", study == "approach" ? (single ? 0.03 : 0.01)
                                                           : (single ? 0.12 : 0.04));
    d.kernel = {{"type", "random_grid"}, {"w", w}, {"mode", single ? "random_component" : "multi"}};
    d.omega = single ? w * w / (3.0 * n) : w * w / 3.0;
    if (study == "coalesce") {
      d.iterations = 1000000;
      d.stride = 100;
      d.stop_on_coalescence = true;
    }
  } else if (study == "metropolis") {
    const double sigma = config.param("sigma", single ? 0.017 : 0.0058);
    d.kernel = {{"type", "random_walk"},
                {"scale", sigma},
                {"proposal", "normal"},
                {"mode", single ? "random_component" : "multi"}};
    d.omega = single ? sigma * sigma / n : sigma * sigma;
  } else if (study == "langevin") {
    d.kernel = {{"type", "langevin"},
                {"epsilon", config.param("epsilon", 0.08)},
                {"alpha", config.param("alpha", 0.0)}};
    d.iterations = 1000;
    d.stride = 1;
  } else if (study == "gibbs") {
    d.kernel = {{"type", "gibbs"}, {"components", {0, 1, 2, 3, 4, 5, 6, 7, 8}}};
    d.iterations = 200;
    d.stride = 1;
  } else {
    throw ConfigError("unknown mvn9 study '" + study + "'");
  }
  return d;
}

std::optional<LinearFit> window_fit(const std::vector<double>& t, const std::vector<double>& y,
                                    double from, double to) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= from && t[i] <= to && std::isfinite(y[i])) {
      xs.push_back(t[i]);
      ys.push_back(y[i]);
    }
  }
  if (xs.size() < 2) return std::nullopt;
  return linear_fit(xs, ys);
}

}  // namespace

Report cmd_mvn9(const RunConfig& config) {
  const detail::Stopwatch clock;
  const std::string study = config.param<std::string>("study", "approach");
  const auto defaults = study_defaults(config, study);
  const auto iterations = config.n.value_or(config.param("iterations", defaults.iterations));
  const auto stride = config.param("stride", defaults.stride);
  const auto replicates = config.param<std::size_t>("replicates", 1);
  if (stride == 0 || iterations == 0 || replicates == 0) {
    throw ConfigError("iterations, stride and replicates must be positive");
  }
  const auto early = config.param("early_window", std::vector<double>{250.0, 1250.0});
  const auto late = config.param("late_window", std::vector<double>{4000.0, 8000.0});
  if (early.size() != 2 || late.size() != 2) throw ConfigError("fit windows are [from, to]");

  const auto target = mvn9();
  const auto spec = mvn9_spec();
  const auto kernel = detail::configured_kernel(config, target, defaults.kernel);

  ChainState a{mvn9_start_x(), {}};
  ChainState b{mvn9_start_x_prime(), {}};
  if (study == "langevin" && config.param("alpha", 0.0) > 0.0) {
    a.p.assign(9, 0.0);
    b.p.assign(9, 0.0);
  }

  Report report;
  std::vector<double> mean_metric;
  std::vector<double> mean_euclid;
  std::vector<double> times;
  nlohmann::json runs = nlohmann::json::array();
  StepStats stats;
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    const std::uint64_t seed = config.seed + rep;
    const auto run = run_pair(*kernel, a, b, spec.precision, seed, iterations, stride,
                              defaults.stop_on_coalescence);
    stats += run.stats;
    if (rep == 0) {
      times = run.iterations;
      mean_metric.assign(times.size(), 0.0);
      mean_euclid.assign(times.size(), 0.0);
      report.trace = run.states;
    }
    const std::size_t m = std::min(times.size(), run.iterations.size());
    times.resize(m);
    mean_metric.resize(m);
    mean_euclid.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      mean_metric[i] += run.log_metric[i] / static_cast<double>(replicates);
      mean_euclid[i] += run.log_euclidean[i] / static_cast<double>(replicates);
    }
    nlohmann::json r = {{"seed", seed}, {"final_log_sq_distance", run.log_metric.back()}};
    r["coalesced_at"] = run.coalesced_at ? nlohmann::json(*run.coalesced_at) : nlohmann::json();
    runs.push_back(r);
  }

  const double lambda2 = spec.eigenvalues[1];
  const double lambda9 = spec.eigenvalues[8];
  report.summary = {{"experiment", "mvn9"},
                    {"study", study},
                    {"iterations", iterations},
                    {"stride", stride},
                    {"replicates", replicates},
                    {"start_x", a.x},
                    {"start_x_prime", b.x},
                    {"acceptance_rate", stats.proposals ? static_cast<double>(stats.accepts) /
                                                              static_cast<double>(stats.proposals)
                                                        : 0.0},
                    {"eigenvalues", std::vector<double>(spec.eigenvalues.data(),
                                                        spec.eigenvalues.data() + 9)},
                    {"runs", runs}};
  report.summary["rejection_rate"] = 1.0 - report.summary["acceptance_rate"].get<double>();
  if (defaults.omega > 0.0 && !config.params.contains("kernel")) {
    report.summary["omega"] = defaults.omega;
    report.summary["predicted_early_slope"] = -defaults.omega * lambda2;
    report.summary["predicted_late_slope"] = -defaults.omega * lambda9;
  }
  if (auto fit = window_fit(times, mean_metric, early[0], early[1])) {
    report.summary["early_window"] = early;
    report.summary["early_slope"] = fit->slope;
  }
  if (auto fit = window_fit(times, mean_metric, late[0], late[1])) {
    report.summary["late_window"] = late;
    report.summary["late_slope"] = fit->slope;
  }

  auto& table = report.tables["distance.csv"];
  table.first = {"t", "log_sq_distance", "log_sq_euclidean"};
  for (std::size_t i = 0; i < times.size(); ++i) {
    table.second.push_back({times[i], mean_metric[i], mean_euclid[i]});
  }

  report.manifest = detail::base_manifest(config);
  report.manifest.update({{"experiment", "mvn9"},
                          {"study", study},
                          {"iterations", iterations},
                          {"kernel", kernel->descriptor()},
                          {"wall_time_seconds", clock.seconds()}});
  return report;
}

}  // namespace circmc::tools
