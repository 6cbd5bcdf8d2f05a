#pragma once

#include <chrono>
#include <nlohmann/json.hpp>

#include "circmc/engine.hpp"
#include "circmc/kernels.hpp"
#include "circmc_tools/experiments.hpp"

namespace circmc::tools::detail {

struct Sizes {
  std::size_t n;
  std::size_t r;
  std::size_t k;
  std::size_t max_restarts;
};

/// Applies defaults and checks r | N and k < N/2.
Sizes circular_sizes(const RunConfig& config, std::size_t default_n, std::size_t default_r);

/// The configured kernel descriptor, or `fallback` when none is given.
KernelPtr configured_kernel(const RunConfig& config, const TargetPtr& target,
                            const nlohmann::json& fallback);

nlohmann::json coalescence_json(const std::vector<CoalescenceCount>& counts);

nlohmann::json base_manifest(const RunConfig& config);

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);

}  // namespace circmc::tools::detail
