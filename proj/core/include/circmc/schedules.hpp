#pragma once

#include <memory>
#include <vector>

#include "circmc/kernels.hpp"
#include "circmc/logistic.hpp"

namespace circmc {

struct SigmaStage {
  double sigma;
  std::size_t iterations;
};

/// Stages 0.04, 0.02, 0.01, 0.005 of lengths 2000, 8000, 32000, 128000.
std::vector<SigmaStage> default_sigma_stages();

/// The first `count` entries of default_sigma_stages().
std::vector<SigmaStage> truncated_sigma_stages(std::size_t count);

enum class GridFinish { Multi, ComponentSweep };

/// One composite step: multi-dimensional normal-offset Metropolis updates
/// through the stages, then a random-grid update with half-width w, either
/// multi-dimensional or one single-coordinate update per component in turn.
KernelPtr make_varying_sigma_step(TargetPtr target, const std::vector<SigmaStage>& stages,
                                  double w, GridFinish finish);

/// The hybrid iteration for the logistic posterior:
///   10 x (10 persistent Langevin on b [eps 0.05, alpha 0.97];
///         25 random-grid on log tau_* [w 0.1]; Gibbs on tau_1..tau_4),
///   then one multi-dimensional random-grid on b [w 0.01], one random-grid on
///   log tau_* [w 0.1], Gibbs on tau_1..tau_4, and a momentum refresh.
KernelPtr make_logistic_iteration(std::shared_ptr<const LogisticPosterior> target);

}  // namespace circmc
