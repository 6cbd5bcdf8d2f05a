#include "circmc/schedules.hpp"

#include <stdexcept>

namespace circmc {

std::vector<SigmaStage> default_sigma_stages() {
  return {{0.04, 2000}, {0.02, 8000}, {0.01, 32000}, {0.005, 128000}};
}

std::vector<SigmaStage> truncated_sigma_stages(std::size_t count) {
  auto stages = default_sigma_stages();
  if (count == 0 || count > stages.size()) {
    throw std::invalid_argument("truncated_sigma_stages: count outside 1..4");
  }
  stages.resize(count);
  return stages;
}

KernelPtr make_varying_sigma_step(TargetPtr target, const std::vector<SigmaStage>& stages,
                                  double w, GridFinish finish) {
  std::vector<KernelPtr> parts;
  for (const auto& stage : stages) {
    RandomWalkMetropolis::Params p;
    p.scale = stage.sigma;
    p.shape = OffsetShape::Normal;
    p.mode = UpdateMode::Multi;
    parts.push_back(std::make_shared<Repeat>(std::make_shared<RandomWalkMetropolis>(target, p),
                                             stage.iterations));
  }
  if (finish == GridFinish::Multi) {
    RandomGridMetropolis::Params g;
    g.w = w;
    parts.push_back(std::make_shared<RandomGridMetropolis>(target, g));
  } else {
    for (std::size_t i = 0; i < target->dimension(); ++i) {
      RandomGridMetropolis::Params g;
      g.w = w;
      g.coords = CoordRange{i, 1};
      parts.push_back(std::make_shared<RandomGridMetropolis>(target, g));
    }
  }
  return std::make_shared<Composite>(std::move(parts));
}

KernelPtr make_logistic_iteration(std::shared_ptr<const LogisticPosterior> target) {
  const CoordRange b = LogisticPosterior::coefficient_range();
  const CoordRange tau = LogisticPosterior::tau_range();

  Langevin::Params lp;
  lp.epsilon = 0.05;
  lp.alpha = 0.97;
  lp.coords = b;
  const auto langevin = std::make_shared<Langevin>(target, lp);

  RandomGridMetropolis::Params tp;
  tp.w = 0.1;
  tp.coords = LogisticPosterior::tau_star_range();
  tp.transform = CoordTransform::Log;
  const auto tau_star_grid = std::make_shared<RandomGridMetropolis>(target, tp);

  std::vector<std::size_t> tau_components;
  for (std::size_t i = tau.begin; i < tau.end(); ++i) tau_components.push_back(i);
  const auto gibbs = std::make_shared<GibbsInversion>(target, tau_components);

  const auto inner = std::make_shared<Composite>(std::vector<KernelPtr>{
      std::make_shared<Repeat>(langevin, 10), std::make_shared<Repeat>(tau_star_grid, 25), gibbs});

  RandomGridMetropolis::Params bp;
  bp.w = 0.01;
  bp.coords = b;
  return std::make_shared<Composite>(std::vector<KernelPtr>{
      std::make_shared<Repeat>(inner, 10), std::make_shared<RandomGridMetropolis>(target, bp),
      tau_star_grid, gibbs, std::make_shared<MomentumRefresh>(b.count)});
}

}  // namespace circmc
