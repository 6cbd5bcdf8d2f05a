#pragma once

#include <memory>
#include <nlohmann/json.hpp>
#include <vector>

#include "circmc/rng.hpp"
#include "circmc/state.hpp"
#include "circmc/targets.hpp"

namespace circmc {

/// Start-state distribution p0. Like kernels, each draw consumes a fixed
/// number of uniforms.
class InitialDistribution {
 public:
  virtual ~InitialDistribution() = default;
  virtual std::size_t budget() const = 0;
  virtual ChainState draw(const UniformBlock& block) const = 0;
  virtual nlohmann::json descriptor() const = 0;
};

using InitialPtr = std::shared_ptr<const InitialDistribution>;

/// Independent N(mean_i, sd^2) in every coordinate.
class IsotropicNormalInit : public InitialDistribution {
 public:
  IsotropicNormalInit(std::vector<double> mean, double sd);

  std::size_t budget() const override { return mean_.size(); }
  ChainState draw(const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;

 private:
  std::vector<double> mean_;
  double sd_;
};

/// Always the same state. Consumes one uniform so the budget stays positive.
class PointInit : public InitialDistribution {
 public:
  explicit PointInit(ChainState state);

  std::size_t budget() const override { return 1; }
  ChainState draw(const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;

 private:
  ChainState state_;
};

/// Exact draws from a target that has an exact sampler.
class TargetExactInit : public InitialDistribution {
 public:
  explicit TargetExactInit(TargetPtr target);

  std::size_t budget() const override { return target_->exact_sampler_budget(); }
  ChainState draw(const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;

 private:
  TargetPtr target_;
};

/// Prior draw for the logistic model: tau_* ~ Exp(1), tau_j ~ Exp(tau_*),
/// b(0,k) ~ N(0,1), b(j,k) ~ N(0, 1/tau_j), momentum ~ N(0, I_15).
class LogisticPriorInit : public InitialDistribution {
 public:
  std::size_t budget() const override { return 35; }
  ChainState draw(const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;
};

/// Draw the start state for `chain_id` (0 for the main chain, i for the
/// i-th auxiliary chain or parallel segment) from its own stream.
ChainState draw_initial(const InitialDistribution& p0, std::uint64_t seed, std::uint64_t chain_id);

}  // namespace circmc
