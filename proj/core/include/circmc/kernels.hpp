#pragma once

#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "circmc/rng.hpp"
#include "circmc/state.hpp"
#include "circmc/targets.hpp"

namespace circmc {

/// Proposal and acceptance counts from one application of a kernel.
struct StepStats {
  std::size_t proposals = 0;
  std::size_t accepts = 0;

  StepStats& operator+=(const StepStats& other) {
    proposals += other.proposals;
    accepts += other.accepts;
    return *this;
  }
};

/// A coupled transition x_{t+1} = phi(x_t, u_t). Every application reads
/// exactly budget() uniforms from the block regardless of the state.
class Kernel {
 public:
  virtual ~Kernel() = default;

  virtual std::size_t budget() const = 0;
  virtual StepStats apply(ChainState& state, const UniformBlock& block) const = 0;
  virtual nlohmann::json descriptor() const = 0;

  ChainState step(ChainState state, const UniformBlock& block) const {
    apply(state, block);
    return state;
  }
};

using KernelPtr = std::shared_ptr<const Kernel>;

/// 2w[(u1 - 1/2) + Round(x/(2w) - (u1 - 1/2))] with Round(z) = floor(z + 1/2).
double rg_grid_point(double x, double u1, double w) noexcept;

enum class UpdateMode { Multi, RandomComponent };
enum class CoordTransform { Identity, Log };
enum class OffsetShape { Uniform, Normal };

/// Random-grid Metropolis over a coordinate range.
///
/// Multi: slot 0 is the accept uniform, slots 1..d place the grid.
/// RandomComponent: slot 0 picks the coordinate (floor(u*d)), slot 1 accepts,
/// slot 2 places the grid.
/// With the Log transform the grid lives on log x and the acceptance ratio
/// carries the Jacobian.
class RandomGridMetropolis : public Kernel {
 public:
  struct Params {
    double w = 0.5;
    UpdateMode mode = UpdateMode::Multi;
    std::optional<CoordRange> coords;
    CoordTransform transform = CoordTransform::Identity;
  };

  RandomGridMetropolis(TargetPtr target, Params params);

  std::size_t budget() const override;
  StepStats apply(ChainState& state, const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;

 private:
  TargetPtr target_;
  Params params_;
  CoordRange coords_;
};

/// Metropolis with a random offset shared by every chain.
///
/// Uniform offsets are 2w(u - 1/2) (scale = w); normal offsets are
/// sigma * Phi^{-1}(u) (scale = sigma). Slot layout as for random-grid.
class RandomWalkMetropolis : public Kernel {
 public:
  struct Params {
    double scale = 0.1;
    OffsetShape shape = OffsetShape::Normal;
    UpdateMode mode = UpdateMode::Multi;
    std::optional<CoordRange> coords;
  };

  RandomWalkMetropolis(TargetPtr target, Params params);

  std::size_t budget() const override;
  StepStats apply(ChainState& state, const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;

 private:
  TargetPtr target_;
  Params params_;
  CoordRange coords_;
};

/// One corrected Langevin (single leapfrog) update with optional momentum
/// persistence. Slots 0..m-1 are the momentum normals, slot m accepts.
///
/// alpha = 0 draws fresh momentum each time; state.p is left alone when
/// empty. alpha > 0 requires state.p to hold m entries and updates it to
/// alpha*p + sqrt(1-alpha^2)*n. On rejection x is kept and p is negated.
class Langevin : public Kernel {
 public:
  struct Params {
    double epsilon = 0.1;
    double alpha = 0.0;
    std::optional<CoordRange> coords;
    bool corrected = true;
  };

  Langevin(TargetPtr target, Params params);

  std::size_t budget() const override { return coords_.count + 1; }
  StepStats apply(ChainState& state, const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;

 private:
  TargetPtr target_;
  Params params_;
  CoordRange coords_;
};

/// Gibbs updates by inversion, one uniform per listed component, in order.
class GibbsInversion : public Kernel {
 public:
  GibbsInversion(TargetPtr target, std::vector<std::size_t> components);

  std::size_t budget() const override { return components_.size(); }
  StepStats apply(ChainState& state, const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;

 private:
  TargetPtr target_;
  std::vector<std::size_t> components_;
};

/// Replaces state.p with `dim` fresh standard normals.
class MomentumRefresh : public Kernel {
 public:
  explicit MomentumRefresh(std::size_t dim);

  std::size_t budget() const override { return dim_; }
  StepStats apply(ChainState& state, const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;

 private:
  std::size_t dim_;
};

class Repeat : public Kernel {
 public:
  Repeat(KernelPtr child, std::size_t count);

  std::size_t budget() const override { return child_->budget() * count_; }
  StepStats apply(ChainState& state, const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;

 private:
  KernelPtr child_;
  std::size_t count_;
};

class Composite : public Kernel {
 public:
  explicit Composite(std::vector<KernelPtr> children);

  std::size_t budget() const override { return budget_; }
  StepStats apply(ChainState& state, const UniformBlock& block) const override;
  nlohmann::json descriptor() const override;

  const std::vector<KernelPtr>& children() const { return children_; }

 private:
  std::vector<KernelPtr> children_;
  std::size_t budget_ = 0;
};

/// Builds a kernel from its descriptor. Throws std::invalid_argument on
/// unknown types or malformed parameters.
KernelPtr make_kernel(const nlohmann::json& descriptor, TargetPtr target);

}  // namespace circmc
