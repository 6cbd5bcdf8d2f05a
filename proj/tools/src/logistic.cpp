#include <cmath>
#include <string>

#include "circmc/engine.hpp"
#include "circmc/initial.hpp"
#include "circmc/logistic.hpp"
#include "circmc/schedules.hpp"
#include "common.hpp"

namespace circmc::tools {

namespace {

double inverse_sqrt_tau(const ChainState& s, std::size_t j) {
  return 1.0 / std::sqrt(s.x[LogisticPosterior::kTauBegin + j - 1]);
}

}  // namespace

Report cmd_logistic(const RunConfig& config) {
  const detail::Stopwatch clock;
  const auto sizes = detail::circular_sizes(config, 100, 10);
  const auto dataset_seed = config.param<std::uint64_t>("dataset_seed", 1);
  const auto dataset_path = config.param<std::string>("dataset", "");

  LogisticDataset data =
      dataset_path.empty() ? simulate_logistic_dataset(dataset_seed) : read_dataset_csv(dataset_path);
  data.validate();
  const auto target = std::make_shared<const LogisticPosterior>(data);
  const auto kernel = config.params.contains("kernel")
                          ? detail::configured_kernel(config, target, nullptr)
                          : make_logistic_iteration(target);
  const LogisticPriorInit p0;
  ParallelOptions popt;
  popt.r = sizes.r;
  popt.max_restarts = sizes.max_restarts;
  popt.threads = config.threads;

  const auto result = run_parallel(*kernel, p0, config.seed, sizes.n, popt);
  const auto& par = *result.parallel;

  std::size_t simulated = 0;
  for (auto e : par.evaluations) simulated += e;
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& round : par.rounds) {
    std::size_t evaluations = 0;
    std::size_t coalesced = 0;
    for (const auto& rec : round) {
      evaluations += rec.evaluations;
      if (rec.coalesced) ++coalesced;
    }
    rounds.push_back(
        {{"resimulations", round.size()}, {"evaluations", evaluations}, {"coalesced", coalesced}});
  }

  std::vector<double> inv_sqrt_tau(4, 0.0);
  for (const auto& s : result.y_trace) {
    for (std::size_t j = 1; j <= 4; ++j) inv_sqrt_tau[j - 1] += inverse_sqrt_tau(s, j);
  }
  for (auto& v : inv_sqrt_tau) v /= static_cast<double>(result.y_trace.size());
  const bool shrinkage = std::max(inv_sqrt_tau[2], inv_sqrt_tau[3]) <
                         std::min(inv_sqrt_tau[0], inv_sqrt_tau[1]);

  Report report;
  auto& derived = report.tables["derived.csv"];
  derived.first = {"t"};
  for (std::size_t j = 0; j <= 4; ++j) {
    derived.first.push_back("b" + std::to_string(j) + "1_minus_b" + std::to_string(j) + "2");
    derived.first.push_back("b" + std::to_string(j) + "2_minus_b" + std::to_string(j) + "3");
  }
  for (std::size_t j = 1; j <= 4; ++j) {
    derived.first.push_back("log10_inv_sqrt_tau" + std::to_string(j));
  }
  for (std::size_t t = 0; t < result.y_trace.size(); ++t) {
    const auto& s = result.y_trace[t];
    std::vector<double> row{static_cast<double>(t)};
    for (std::size_t j = 0; j <= 4; ++j) {
      row.push_back(s.x[LogisticPosterior::index(j, 1)] - s.x[LogisticPosterior::index(j, 2)]);
      row.push_back(s.x[LogisticPosterior::index(j, 2)] - s.x[LogisticPosterior::index(j, 3)]);
    }
    for (std::size_t j = 1; j <= 4; ++j) row.push_back(std::log10(inverse_sqrt_tau(s, j)));
    derived.second.push_back(std::move(row));
  }
  auto& dataset = report.tables["dataset.csv"];
  dataset.first = {"x1", "x2", "x3", "x4", "class"};
  for (std::size_t i = 0; i < data.predictors.size(); ++i) {
    const auto& p = data.predictors[i];
    dataset.second.push_back({p[0], p[1], p[2], p[3], static_cast<double>(data.classes[i])});
  }
  report.trace = result.y_trace;

  report.summary = {{"experiment", "logistic"},
                    {"status", to_string(result.status)},
                    {"N", sizes.n},
                    {"r", sizes.r},
                    {"new_starts", par.new_starts},
                    {"max_new_starts", par.max_new_starts},
                    {"segment_evaluations", par.evaluations},
                    {"total_iterations", simulated},
                    {"rounds", rounds},
                    {"mean_inv_sqrt_tau", inv_sqrt_tau},
                    {"shrinkage", shrinkage}};
  report.manifest = detail::base_manifest(config);
  report.manifest.update({{"experiment", "logistic"},
                          {"N", sizes.n},
                          {"r", sizes.r},
                          {"max_restarts", sizes.max_restarts},
                          {"dataset_seed", dataset_path.empty() ? nlohmann::json(dataset_seed)
                                                                : nlohmann::json()},
                          {"dataset", dataset_path},
                          {"kernel", kernel->descriptor()},
                          {"p0", p0.descriptor()},
                          {"status", to_string(result.status)},
                          {"new_starts", par.new_starts},
                          {"wall_time_seconds", clock.seconds()}});
  return report;
}

}  // namespace circmc::tools
