#include "circmc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "circmc/special.hpp"

namespace circmc {

namespace {

// Saved coordinates for in-place proposals; small cases stay on the stack.
class Backup {
 public:
  explicit Backup(std::size_t n) : size_(n) {
    if (n > kInline) heap_.resize(n);
  }
  double& operator[](std::size_t i) { return size_ > kInline ? heap_[i] : inline_[i]; }

 private:
  static constexpr std::size_t kInline = 32;
  std::size_t size_;
  double inline_[kInline];
  std::vector<double> heap_;
};

CoordRange resolve(const std::optional<CoordRange>& coords, const Target& target) {
  const CoordRange range = coords.value_or(CoordRange::all(target.dimension()));
  if (range.count == 0 || range.end() > target.dimension()) {
    throw std::invalid_argument("kernel coordinate range outside target dimension");
  }
  return range;
}

std::size_t pick_component(double u, const CoordRange& range) {
  const auto offset = static_cast<std::size_t>(std::floor(u * static_cast<double>(range.count)));
  return range.begin + std::min(offset, range.count - 1);
}

bool accept(double u, double log_ratio) { return std::log(u) < log_ratio; }

double safe_log_density(const Target& target, std::span<const double> x, CoordRange changed) {
  try {
    return target.log_density_partial(x, changed);
  } catch (const std::domain_error&) {
    return -std::numeric_limits<double>::infinity();
  }
}

const char* mode_name(UpdateMode mode) {
  return mode == UpdateMode::Multi ? "multi" : "random_component";
}

UpdateMode parse_mode(const std::string& s) {
  if (s == "multi") return UpdateMode::Multi;
  if (s == "random_component") return UpdateMode::RandomComponent;
  throw std::invalid_argument("unknown update mode '" + s + "'");
}

void put_coords(nlohmann::json& j, const std::optional<CoordRange>& coords) {
  if (coords) j["coords"] = {coords->begin, coords->count};
}

std::optional<CoordRange> get_coords(const nlohmann::json& j) {
  if (!j.contains("coords")) return std::nullopt;
  const auto& c = j.at("coords");
  if (!c.is_array() || c.size() != 2) {
    throw std::invalid_argument("coords must be [begin, count]");
  }
  return CoordRange{c[0].get<std::size_t>(), c[1].get<std::size_t>()};
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

double rg_grid_point(double x, double u1, double w) noexcept {
  const double shift = u1 - 0.5;
  return 2.0 * w * (shift + std::floor(x / (2.0 * w) - shift + 0.5));
}

RandomGridMetropolis::RandomGridMetropolis(TargetPtr target, Params params)
    : target_(std::move(target)), params_(params) {
  if (!target_) throw std::invalid_argument("random_grid: null target");
  require_positive(params_.w, "random_grid w");
  coords_ = resolve(params_.coords, *target_);
}

std::size_t RandomGridMetropolis::budget() const {
  return params_.mode == UpdateMode::Multi ? coords_.count + 1 : 3;
}

StepStats RandomGridMetropolis::apply(ChainState& state, const UniformBlock& block) const {
  auto& x = state.x;
  const bool log_scale = params_.transform == CoordTransform::Log;
  const double w = params_.w;

  auto propose = [&](std::size_t i, double u1) -> double {
    if (!log_scale) {
      const double old = x[i];
      x[i] = rg_grid_point(old, u1, w);
      return 0.0;
    }
    const double v = std::log(x[i]);
    const double v_new = rg_grid_point(v, u1, w);
    x[i] = std::exp(v_new);
    return v_new - v;
  };

  if (params_.mode == UpdateMode::RandomComponent) {
    const std::size_t i = pick_component(block.uniform(0), coords_);
    const double u0 = block.uniform(1);
    const double u1 = block.uniform(2);
    const CoordRange changed{i, 1};
    const double lp_old = safe_log_density(*target_, x, changed);
    const double saved = x[i];
    const double jacobian = propose(i, u1);
    const double lp_new = safe_log_density(*target_, x, changed);
    if (accept(u0, lp_new - lp_old + jacobian)) return {1, 1};
    x[i] = saved;
    return {1, 0};
  }

  const double u0 = block.uniform(0);
  const double lp_old = safe_log_density(*target_, x, coords_);
  Backup saved(coords_.count);
  double jacobian = 0.0;
  for (std::size_t k = 0; k < coords_.count; ++k) {
    const std::size_t i = coords_.begin + k;
    saved[k] = x[i];
    jacobian += propose(i, block.uniform(1 + k));
  }
  const double lp_new = safe_log_density(*target_, x, coords_);
  if (accept(u0, lp_new - lp_old + jacobian)) return {1, 1};
  for (std::size_t k = 0; k < coords_.count; ++k) x[coords_.begin + k] = saved[k];
  return {1, 0};
}

nlohmann::json RandomGridMetropolis::descriptor() const {
  nlohmann::json j = {{"type", "random_grid"},
                      {"w", params_.w},
                      {"mode", mode_name(params_.mode)},
                      {"transform", params_.transform == CoordTransform::Log ? "log" : "identity"}};
  put_coords(j, params_.coords);
  return j;
}

RandomWalkMetropolis::RandomWalkMetropolis(TargetPtr target, Params params)
    : target_(std::move(target)), params_(params) {
  if (!target_) throw std::invalid_argument("random_walk: null target");
  require_positive(params_.scale, "random_walk scale");
  coords_ = resolve(params_.coords, *target_);
}

std::size_t RandomWalkMetropolis::budget() const {
  return params_.mode == UpdateMode::Multi ? coords_.count + 1 : 3;
}

StepStats RandomWalkMetropolis::apply(ChainState& state, const UniformBlock& block) const {
  auto& x = state.x;
  auto offset = [&](double u) {
    return params_.shape == OffsetShape::Uniform ? 2.0 * params_.scale * (u - 0.5)
                                                 : params_.scale * inverse_normal_cdf(u);
  };

  if (params_.mode == UpdateMode::RandomComponent) {
    const std::size_t i = pick_component(block.uniform(0), coords_);
    const double u0 = block.uniform(1);
    const double delta = offset(block.uniform(2));
    const CoordRange changed{i, 1};
    const double lp_old = safe_log_density(*target_, x, changed);
    const double saved = x[i];
    x[i] = saved + delta;
    const double lp_new = safe_log_density(*target_, x, changed);
    if (accept(u0, lp_new - lp_old)) return {1, 1};
    x[i] = saved;
    return {1, 0};
  }

  const double u0 = block.uniform(0);
  const double lp_old = safe_log_density(*target_, x, coords_);
  Backup saved(coords_.count);
  for (std::size_t k = 0; k < coords_.count; ++k) {
    const std::size_t i = coords_.begin + k;
    saved[k] = x[i];
    x[i] = saved[k] + offset(block.uniform(1 + k));
  }
  const double lp_new = safe_log_density(*target_, x, coords_);
  if (accept(u0, lp_new - lp_old)) return {1, 1};
  for (std::size_t k = 0; k < coords_.count; ++k) x[coords_.begin + k] = saved[k];
  return {1, 0};
}

nlohmann::json RandomWalkMetropolis::descriptor() const {
  nlohmann::json j = {{"type", "random_walk"},
                      {"scale", params_.scale},
                      {"proposal", params_.shape == OffsetShape::Uniform ? "uniform" : "normal"},
                      {"mode", mode_name(params_.mode)}};
  put_coords(j, params_.coords);
  return j;
}

Langevin::Langevin(TargetPtr target, Params params)
    : target_(std::move(target)), params_(params) {
  if (!target_) throw std::invalid_argument("langevin: null target");
  if (!target_->has_gradient()) {
    throw std::invalid_argument("langevin: target '" + target_->name() + "' has no gradient");
  }
  require_positive(params_.epsilon, "langevin epsilon");
  if (!(params_.alpha >= 0.0 && params_.alpha < 1.0)) {
    throw std::invalid_argument("langevin alpha must lie in [0,1)");
  }
  coords_ = resolve(params_.coords, *target_);
}

StepStats Langevin::apply(ChainState& state, const UniformBlock& block) const {
  const std::size_t m = coords_.count;
  const double eps = params_.epsilon;
  const double alpha = params_.alpha;
  if (!state.p.empty() && state.p.size() != m) {
    throw std::invalid_argument("langevin: momentum size does not match coordinate range");
  }
  if (alpha > 0.0 && state.p.empty()) {
    throw std::invalid_argument("langevin: persistent momentum requires state.p");
  }

  std::vector<double> p(m);
  const double keep = std::sqrt(1.0 - alpha * alpha);
  for (std::size_t k = 0; k < m; ++k) {
    const double n = block.normal(k);
    p[k] = alpha == 0.0 ? n : alpha * state.p[k] + keep * n;
  }
  const double u = block.uniform(m);

  const std::size_t d = target_->dimension();
  std::vector<double> grad(d);
  const double e_old = target_->energy_and_gradient(state.x, grad);
  double kinetic_old = 0.0;
  for (double v : p) kinetic_old += 0.5 * v * v;

  std::vector<double> x_new = state.x;
  std::vector<double> p_new(m);
  for (std::size_t k = 0; k < m; ++k) {
    p_new[k] = p[k] - 0.5 * eps * grad[coords_.begin + k];
    x_new[coords_.begin + k] += eps * p_new[k];
  }
  double e_new;
  try {
    e_new = target_->energy_and_gradient(x_new, grad);
  } catch (const std::domain_error&) {
    e_new = std::numeric_limits<double>::infinity();
  }
  double kinetic_new = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    p_new[k] -= 0.5 * eps * grad[coords_.begin + k];
    kinetic_new += 0.5 * p_new[k] * p_new[k];
  }

  const bool accepted =
      std::isfinite(e_new) &&
      (!params_.corrected || accept(u, (e_old + kinetic_old) - (e_new + kinetic_new)));
  if (accepted) {
    state.x = std::move(x_new);
    p = std::move(p_new);
  } else {
    for (double& v : p) v = -v;
  }
  if (!state.p.empty()) state.p = std::move(p);
  return {1, accepted ? 1u : 0u};
}

nlohmann::json Langevin::descriptor() const {
  nlohmann::json j = {{"type", "langevin"},
                      {"epsilon", params_.epsilon},
                      {"alpha", params_.alpha},
                      {"corrected", params_.corrected}};
  put_coords(j, params_.coords);
  return j;
}

GibbsInversion::GibbsInversion(TargetPtr target, std::vector<std::size_t> components)
    : target_(std::move(target)), components_(std::move(components)) {
  if (!target_) throw std::invalid_argument("gibbs: null target");
  if (components_.empty()) throw std::invalid_argument("gibbs: no components");
  for (std::size_t i : components_) {
    if (!target_->has_conditional(i)) {
      throw std::invalid_argument("gibbs: no conditional for component " + std::to_string(i));
    }
  }
}

StepStats GibbsInversion::apply(ChainState& state, const UniformBlock& block) const {
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const std::size_t i = components_[k];
    const auto cond = target_->conditional(state.x, i);
    if (!cond) throw std::logic_error("gibbs: conditional unavailable");
    const double u = block.uniform(k);
    const double standard = cond->family == Conditional::Family::Normal
                                ? inverse_normal_cdf(u)
                                : gamma_quantile_bisect(cond->shape, u);
    state.x[i] = cond->location + cond->scale * standard;
  }
  return {components_.size(), components_.size()};
}

nlohmann::json GibbsInversion::descriptor() const {
  return {{"type", "gibbs"}, {"components", components_}};
}

MomentumRefresh::MomentumRefresh(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("momentum_refresh: dim must be positive");
}

StepStats MomentumRefresh::apply(ChainState& state, const UniformBlock& block) const {
  state.p.resize(dim_);
  for (std::size_t k = 0; k < dim_; ++k) state.p[k] = block.normal(k);
  return {};
}

nlohmann::json MomentumRefresh::descriptor() const {
  return {{"type", "momentum_refresh"}, {"dim", dim_}};
}

Repeat::Repeat(KernelPtr child, std::size_t count) : child_(std::move(child)), count_(count) {
  if (!child_) throw std::invalid_argument("repeat: null child");
  if (count_ == 0) throw std::invalid_argument("repeat: count must be positive");
}

StepStats Repeat::apply(ChainState& state, const UniformBlock& block) const {
  const std::size_t b = child_->budget();
  if (block.size() < budget()) throw std::out_of_range("repeat: block smaller than budget");
  StepStats stats;
  for (std::size_t i = 0; i < count_; ++i) stats += child_->apply(state, block.slice(i * b, b));
  return stats;
}

nlohmann::json Repeat::descriptor() const {
  return {{"type", "repeat"}, {"count", count_}, {"kernel", child_->descriptor()}};
}

Composite::Composite(std::vector<KernelPtr> children) : children_(std::move(children)) {
  if (children_.empty()) throw std::invalid_argument("composite: empty kernel list");
  for (const auto& c : children_) {
    if (!c) throw std::invalid_argument("composite: null child");
    budget_ += c->budget();
  }
}

StepStats Composite::apply(ChainState& state, const UniformBlock& block) const {
  if (block.size() < budget_) throw std::out_of_range("composite: block smaller than budget");
  StepStats stats;
  std::size_t offset = 0;
  for (const auto& c : children_) {
    const std::size_t b = c->budget();
    stats += c->apply(state, block.slice(offset, b));
    offset += b;
  }
  return stats;
}

nlohmann::json Composite::descriptor() const {
  nlohmann::json kernels = nlohmann::json::array();
  for (const auto& c : children_) kernels.push_back(c->descriptor());
  return {{"type", "composite"}, {"kernels", kernels}};
}

KernelPtr make_kernel(const nlohmann::json& j, TargetPtr target) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "random_grid") {
      RandomGridMetropolis::Params p;
      p.w = j.at("w").get<double>();
      p.mode = parse_mode(j.value("mode", "multi"));
      p.coords = get_coords(j);
      const std::string transform = j.value("transform", "identity");
      if (transform != "identity" && transform != "log") {
        throw std::invalid_argument("unknown transform '" + transform + "'");
      }
      p.transform = transform == "log" ? CoordTransform::Log : CoordTransform::Identity;
      return std::make_shared<RandomGridMetropolis>(target, p);
    }
    if (type == "random_walk") {
      RandomWalkMetropolis::Params p;
      p.scale = j.at("scale").get<double>();
      const std::string shape = j.value("proposal", "normal");
      if (shape != "normal" && shape != "uniform") {
        throw std::invalid_argument("unknown proposal '" + shape + "'");
      }
      p.shape = shape == "uniform" ? OffsetShape::Uniform : OffsetShape::Normal;
      p.mode = parse_mode(j.value("mode", "multi"));
      p.coords = get_coords(j);
      return std::make_shared<RandomWalkMetropolis>(target, p);
    }
    if (type == "langevin") {
      Langevin::Params p;
      p.epsilon = j.at("epsilon").get<double>();
      p.alpha = j.value("alpha", 0.0);
      p.corrected = j.value("corrected", true);
      p.coords = get_coords(j);
      return std::make_shared<Langevin>(target, p);
    }
    if (type == "gibbs") {
      return std::make_shared<GibbsInversion>(
          target, j.at("components").get<std::vector<std::size_t>>());
    }
    if (type == "momentum_refresh") {
      return std::make_shared<MomentumRefresh>(j.at("dim").get<std::size_t>());
    }
    if (type == "repeat") {
      return std::make_shared<Repeat>(make_kernel(j.at("kernel"), target),
                                      j.at("count").get<std::size_t>());
    }
    if (type == "composite") {
      std::vector<KernelPtr> children;
      for (const auto& c : j.at("kernels")) children.push_back(make_kernel(c, target));
      return std::make_shared<Composite>(std::move(children));
    }
    throw std::invalid_argument("unknown kernel type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed kernel descriptor: ") + e.what());
  }
}

}  // namespace circmc
