#include "circmc/initial.hpp"

#include <cmath>
#include <stdexcept>

namespace circmc {

IsotropicNormalInit::IsotropicNormalInit(std::vector<double> mean, double sd)
    : mean_(std::move(mean)), sd_(sd) {
  if (mean_.empty()) throw std::invalid_argument("IsotropicNormalInit: empty mean");
  if (!(sd_ > 0.0)) throw std::invalid_argument("IsotropicNormalInit: sd must be positive");
}

ChainState IsotropicNormalInit::draw(const UniformBlock& block) const {
  ChainState s;
  s.x.resize(mean_.size());
  for (std::size_t i = 0; i < mean_.size(); ++i) s.x[i] = mean_[i] + sd_ * block.normal(i);
  return s;
}

nlohmann::json IsotropicNormalInit::descriptor() const {
  return {{"type", "normal"}, {"mean", mean_}, {"sd", sd_}};
}

PointInit::PointInit(ChainState state) : state_(std::move(state)) {
  if (state_.x.empty()) throw std::invalid_argument("PointInit: empty state");
}

ChainState PointInit::draw(const UniformBlock& block) const {
  (void)block.uniform(0);
  return state_;
}

nlohmann::json PointInit::descriptor() const {
  nlohmann::json j = {{"type", "point"}, {"x", state_.x}};
  if (!state_.p.empty()) j["p"] = state_.p;
  return j;
}

TargetExactInit::TargetExactInit(TargetPtr target) : target_(std::move(target)) {
  if (!target_ || target_->exact_sampler_budget() == 0) {
    throw std::invalid_argument("TargetExactInit: target has no exact sampler");
  }
}

ChainState TargetExactInit::draw(const UniformBlock& block) const {
  ChainState s;
  s.x.resize(target_->dimension());
  target_->sample_exact(block, s.x);
  return s;
}

nlohmann::json TargetExactInit::descriptor() const {
  return {{"type", "exact"}, {"target", target_->name()}};
}

ChainState LogisticPriorInit::draw(const UniformBlock& block) const {
  ChainState s;
  s.x.assign(20, 0.0);
  const double tau_star = -std::log(block.uniform(0));
  s.x[19] = tau_star;
  for (std::size_t j = 1; j <= 4; ++j) s.x[15 + j - 1] = -std::log(block.uniform(j)) / tau_star;
  for (std::size_t k = 0; k < 3; ++k) s.x[k] = block.normal(5 + k);
  for (std::size_t j = 1; j <= 4; ++j) {
    const double sd = 1.0 / std::sqrt(s.x[15 + j - 1]);
    for (std::size_t k = 0; k < 3; ++k) s.x[3 * j + k] = sd * block.normal(5 + 3 * j + k);
  }
  s.p.resize(15);
  for (std::size_t k = 0; k < 15; ++k) s.p[k] = block.normal(20 + k);
  return s;
}

nlohmann::json LogisticPriorInit::descriptor() const { return {{"type", "logistic_prior"}}; }

ChainState draw_initial(const InitialDistribution& p0, std::uint64_t seed, std::uint64_t chain_id) {
  return p0.draw(block_for(seed, streams::initial(chain_id),
                           static_cast<std::int64_t>(p0.budget())));
}

}  // namespace circmc
